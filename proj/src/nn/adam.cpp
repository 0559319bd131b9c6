// src/nn/adam.cpp

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

#include "listen/nn/adam.hpp"

#include <cmath>

#include "listen/errors.hpp"

namespace listen::nn {

template <typename Real>
AdamState<Real> make_adam_state(std::span<Parameter<Real>* const> params, AdamConfig config) {
  AdamState<Real> s;
  s.config = config;
  for (const Parameter<Real>* p : params) {
    s.m.emplace_back(p->tensor.size(), Real(0));
    s.v.emplace_back(p->tensor.size(), Real(0));
  }
  return s;
}

template <typename Real>
void adam_step(std::span<Parameter<Real>* const> params, AdamState<Real>& state) {
  if (state.m.size() != params.size()) throw ShapeError("adam_step: state/parameter count mismatch");
  ++state.step;
  const AdamConfig& c = state.config;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(c.beta1, t);
  const double correct2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor<Real>& w = params[i]->tensor;
    auto& m = state.m[i];
    auto& v = state.v[i];
    if (m.size() != w.size()) throw ShapeError("adam_step: moment shape mismatch for " + params[i]->name);
    const auto g = w.grad();
    auto values = w.mutable_values();
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double gj = g.empty() ? 0.0 : static_cast<double>(g[j]);
      const double mj = c.beta1 * m[j] + (1.0 - c.beta1) * gj;
      const double vj = c.beta2 * v[j] + (1.0 - c.beta2) * gj * gj;
      m[j] = static_cast<Real>(mj);
      v[j] = static_cast<Real>(vj);
      const double update = c.lr * (mj / correct1) / (std::sqrt(vj / correct2) + c.eps);
      values[j] = static_cast<Real>(values[j] - update);
    }
  }
}

template AdamState<float> make_adam_state(std::span<Parameter<float>* const>, AdamConfig);
template AdamState<double> make_adam_state(std::span<Parameter<double>* const>, AdamConfig);
template void adam_step(std::span<Parameter<float>* const>, AdamState<float>&);
template void adam_step(std::span<Parameter<double>* const>, AdamState<double>&);

}  // namespace listen::nn
