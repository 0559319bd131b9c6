// include/listen/nn/tensor.hpp

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

#ifndef LISTEN_NN_TENSOR_HPP_
#define LISTEN_NN_TENSOR_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace listen::nn {

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string to_string(const Shape& shape);

template <typename Real>
class Tensor;

namespace detail {

// One vertex of the reverse-mode graph. `backward` reads this node's grad
// and accumulates into its parents.
template <typename Real>
struct Node {
  Shape shape;
  std::vector<Real> value;
  std::vector<Real> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(const Node&)> backward;

  std::vector<Real>& grad_buffer() {
    if (grad.empty()) grad.assign(value.size(), Real(0));
    return grad;
  }
};

}  // namespace detail

// Dense row-major n-d array that records the operations applied to it when
// any input requires a gradient. Copies share the underlying node.
template <typename Real>
class Tensor {
 public:
  using Node = detail::Node<Real>;
  using BackwardFn = std::function<void(const Node&)>;

  Tensor() = default;
  Tensor(Shape shape, std::vector<Real> values, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, Real value, bool requires_grad = false);
  static Tensor scalar(Real value) { return Tensor({}, {value}); }

  // Result of an op. Records `backward` and the parents only when some
  // parent requires a gradient.
  static Tensor from_op(Shape shape, std::vector<Real> values, const std::vector<Tensor>& parents,
                        BackwardFn backward);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t dim(std::size_t i) const { return node_->shape.at(i); }
  std::size_t size() const { return node_->value.size(); }

  std::span<const Real> values() const { return node_->value; }
  std::span<Real> mutable_values() { return node_->value; }
  Real item() const;

  bool requires_grad() const { return node_->requires_grad; }
  bool has_grad() const { return !node_->grad.empty(); }
  // Empty until a backward pass reaches this tensor.
  std::span<const Real> grad() const { return node_->grad; }
  std::span<Real> mutable_grad() { return node_->grad_buffer(); }
  void zero_grad() { node_->grad.clear(); }

  // Seeds d(this)/d(this) = 1 for a scalar and propagates to every reachable
  // tensor that requires a gradient. Gradients accumulate.
  void backward() const;

  // Same values, no history.
  Tensor detach() const;

  Node& node() const { return *node_; }
  const std::shared_ptr<Node>& node_ptr() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

// Accumulates `g` into the gradient of `parent` when it requires one.
template <typename Real>
inline std::vector<Real>* grad_sink(const std::shared_ptr<detail::Node<Real>>& parent) {
  return parent->requires_grad ? &parent->grad_buffer() : nullptr;
}

extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace listen::nn

#endif  // LISTEN_NN_TENSOR_HPP_
