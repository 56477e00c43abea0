#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

namespace dplab::nn {

/// N x C x H x W extent.
struct Shape {
  int n = 0, c = 0, h = 0, w = 0;

  std::size_t numel() const noexcept {
    return static_cast<std::size_t>(n) * c * h * w;
  }
  std::size_t plane() const noexcept { return static_cast<std::size_t>(h) * w; }
  std::string str() const;
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// 64-byte aligned storage. Vectorized kernels peel differently depending on
/// the start address, so a fixed alignment keeps results independent of heap layout.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlign{64};

  AlignedAllocator() noexcept = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), kAlign)); }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlign); }

  template <typename U>
  friend bool operator==(const AlignedAllocator&, const AlignedAllocator<U>&) noexcept {
    return true;
  }
};

template <typename T>
using Buffer = std::vector<T, AlignedAllocator<T>>;

namespace detail {

template <typename T>
struct Node {
  Shape shape;
  Buffer<T> value;
  Buffer<T> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  /// Reads this node's grad and accumulates into the parents' grads.
  std::function<void(Node&)> backward_fn;

  bool is_leaf() const noexcept { return !backward_fn; }
  Buffer<T>& ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), T(0));
    return grad;
  }
};

}  // namespace detail

/// Shared handle to a value in a reverse-mode autodiff graph. Copies alias the
/// same storage. Graphs are single-owner: do not run forward/backward on the
/// same graph from several threads.
template <typename T>
class Tensor {
 public:
  using Node = detail::Node<T>;

  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  static Tensor zeros(Shape shape, bool requires_grad = false);
  /// Throws std::invalid_argument when values.size() != shape.numel().
  static Tensor from(Shape shape, std::vector<T> values, bool requires_grad = false);
  static Tensor scalar(T value, bool requires_grad = false);

  bool defined() const noexcept { return node_ != nullptr; }
  const Shape& shape() const noexcept { return node_->shape; }
  std::size_t numel() const noexcept { return node_->value.size(); }
  bool requires_grad() const noexcept { return node_->requires_grad; }

  std::span<T> data() noexcept { return node_->value; }
  std::span<const T> data() const noexcept { return node_->value; }
  /// Gradient buffer; allocated (zeros) on first access.
  std::span<T> grad() { return node_->ensure_grad(); }
  bool has_grad() const noexcept { return node_->grad.size() == node_->value.size(); }
  void zero_grad();

  /// Value of a single-element tensor.
  T item() const;
  /// Same values, no graph history.
  Tensor detach() const;

  const std::shared_ptr<Node>& node() const noexcept { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

/// Reverse-mode pass from a single-element tensor: seeds d(loss) = 1, clears
/// interior gradients, then runs every recorded closure once in reverse
/// topological order. Leaf gradients accumulate across calls.
/// Throws std::invalid_argument for non-scalar losses.
template <typename T>
void backward(const Tensor<T>& loss);

namespace detail {

/// Output node wired to `parents`; records `fn` only when a parent needs grad.
template <typename T>
std::shared_ptr<Node<T>> make_result(Shape shape, std::vector<std::shared_ptr<Node<T>>> parents);

}  // namespace detail

extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace dplab::nn
