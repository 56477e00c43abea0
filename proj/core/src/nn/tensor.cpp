#include "dplab/nn/tensor.hpp"

#include <stdexcept>
#include <unordered_set>

namespace dplab::nn {

std::string Shape::str() const {
  return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
         std::to_string(w) + ")";
}

template <typename T>
Tensor<T> Tensor<T>::zeros(Shape shape, bool requires_grad) {
  auto node = std::make_shared<Node>();
  node->shape = shape;
  node->value.assign(shape.numel(), T(0));
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

template <typename T>
Tensor<T> Tensor<T>::from(Shape shape, std::vector<T> values, bool requires_grad) {
  if (shape.n < 0 || shape.c < 0 || shape.h < 0 || shape.w < 0 || values.size() != shape.numel()) {
    throw std::invalid_argument("tensor values do not match shape " + shape.str());
  }
  auto node = std::make_shared<Node>();
  node->shape = shape;
  node->value.assign(values.begin(), values.end());
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

template <typename T>
Tensor<T> Tensor<T>::scalar(T value, bool requires_grad) {
  return from({1, 1, 1, 1}, {value}, requires_grad);
}

template <typename T>
void Tensor<T>::zero_grad() {
  if (has_grad()) std::fill(node_->grad.begin(), node_->grad.end(), T(0));
}

template <typename T>
T Tensor<T>::item() const {
  if (numel() != 1) throw std::invalid_argument("item() on tensor of shape " + shape().str());
  return node_->value[0];
}

template <typename T>
Tensor<T> Tensor<T>::detach() const {
  auto node = std::make_shared<Node>();
  node->shape = node_->shape;
  node->value = node_->value;
  return Tensor(std::move(node));
}

template <typename T>
void backward(const Tensor<T>& loss) {
  if (!loss.defined() || loss.numel() != 1) {
    throw std::invalid_argument("backward() requires a single-element loss");
  }
  using Node = detail::Node<T>;
  // Iterative post-order DFS gives a topological order (parents before children).
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.push_back({loss.node().get(), 0});
  seen.insert(loss.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (parent->requires_grad && seen.insert(parent).second) stack.push_back({parent, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  for (Node* node : order) {
    if (!node->is_leaf()) {
      node->ensure_grad();
      std::fill(node->grad.begin(), node->grad.end(), T(0));
    }
  }
  loss.node()->ensure_grad()[0] += T(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (!node->is_leaf()) node->backward_fn(*node);
  }
}

namespace detail {

template <typename T>
std::shared_ptr<Node<T>> make_result(Shape shape, std::vector<std::shared_ptr<Node<T>>> parents) {
  auto node = std::make_shared<Node<T>>();
  node->shape = shape;
  node->value.assign(shape.numel(), T(0));
  for (const auto& p : parents) node->requires_grad = node->requires_grad || p->requires_grad;
  if (node->requires_grad) node->parents = std::move(parents);
  return node;
}

template std::shared_ptr<Node<float>> make_result(Shape, std::vector<std::shared_ptr<Node<float>>>);
template std::shared_ptr<Node<double>> make_result(Shape, std::vector<std::shared_ptr<Node<double>>>);

}  // namespace detail

template class Tensor<float>;
template class Tensor<double>;
template void backward(const Tensor<float>&);
template void backward(const Tensor<double>&);

}  // namespace dplab::nn
