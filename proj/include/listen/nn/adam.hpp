// include/listen/nn/adam.hpp

// Copyright 2026  The listen authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef LISTEN_NN_ADAM_HPP_
#define LISTEN_NN_ADAM_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "listen/nn/tensor.hpp"

namespace listen::nn {

template <typename Real>
struct Parameter {
  std::string name;
  Tensor<Real> tensor;
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First and second moments, one pair per parameter in registration order.
template <typename Real>
struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<std::vector<Real>> m;
  std::vector<std::vector<Real>> v;
};

template <typename Real>
AdamState<Real> make_adam_state(std::span<Parameter<Real>* const> params, AdamConfig config = {});

// One bias-corrected Adam update from each parameter's accumulated grad.
// A parameter without a grad is treated as having a zero gradient.
template <typename Real>
void adam_step(std::span<Parameter<Real>* const> params, AdamState<Real>& state);

}  // namespace listen::nn

#endif  // LISTEN_NN_ADAM_HPP_
