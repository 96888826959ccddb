#ifndef GATEKV_UTIL_BOX_HPP
#define GATEKV_UTIL_BOX_HPP

#include <memory>
#include <utility>

namespace gatekv {

/// Value-semantic heap box, used to close recursive value types (nested
/// update operations, nested constraints). Copy copies the pointee.
template <typename T>
class Box {
 public:
  Box() : ptr_(std::make_unique<T>()) {}
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT: implicit by design
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&& other) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&& other) noexcept = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }
  friend bool operator<(const Box& a, const Box& b) { return *a.ptr_ < *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

}  // namespace gatekv

#endif  // GATEKV_UTIL_BOX_HPP
