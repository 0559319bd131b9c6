// src/nn/tensor.cpp

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

#include "listen/nn/tensor.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "listen/errors.hpp"

namespace listen::nn {

std::size_t numel(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string to_string(const Shape& shape) {
  std::ostringstream ss;
  ss << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) ss << (i ? "," : "") << shape[i];
  ss << ')';
  return ss.str();
}

template <typename Real>
Tensor<Real>::Tensor(Shape shape, std::vector<Real> values, bool requires_grad)
    : node_(std::make_shared<Node>()) {
  if (values.size() != numel(shape))
    throw ShapeError("tensor of shape " + to_string(shape) + " given " +
                     std::to_string(values.size()) + " values");
  node_->shape = std::move(shape);
  node_->value = std::move(values);
  node_->requires_grad = requires_grad;
}

template <typename Real>
Tensor<Real> Tensor<Real>::zeros(Shape shape, bool requires_grad) {
  return full(std::move(shape), Real(0), requires_grad);
}

template <typename Real>
Tensor<Real> Tensor<Real>::full(Shape shape, Real value, bool requires_grad) {
  const std::size_t n = numel(shape);
  return Tensor(std::move(shape), std::vector<Real>(n, value), requires_grad);
}

template <typename Real>
Tensor<Real> Tensor<Real>::from_op(Shape shape, std::vector<Real> values,
                                   const std::vector<Tensor>& parents, BackwardFn backward) {
  Tensor out(std::move(shape), std::move(values));
  const bool tracked = std::any_of(parents.begin(), parents.end(),
                                   [](const Tensor& p) { return p.requires_grad(); });
  if (tracked) {
    out.node_->requires_grad = true;
    out.node_->backward = std::move(backward);
    for (const Tensor& p : parents) out.node_->parents.push_back(p.node_);
  }
  return out;
}

template <typename Real>
Real Tensor<Real>::item() const {
  if (size() != 1) throw ShapeError("item() on tensor of shape " + to_string(shape()));
  return node_->value[0];
}

template <typename Real>
void Tensor<Real>::backward() const {
  if (size() != 1) throw ShapeError("backward() needs a scalar, got " + to_string(shape()));
  if (!requires_grad()) return;

  // Iterative post-order DFS gives a topological order (parents first).
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack{{node_.get(), 0}};
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (parent->requires_grad && visited.insert(parent).second) stack.push_back({parent, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  node_->grad_buffer()[0] += Real(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (node->backward && !node->grad.empty()) node->backward(*node);
  }
}

template <typename Real>
Tensor<Real> Tensor<Real>::detach() const {
  return Tensor(node_->shape, node_->value, false);
}

template class Tensor<float>;
template class Tensor<double>;

}  // namespace listen::nn
