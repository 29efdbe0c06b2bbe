#pragma once

// Auxiliary-storage accounting.
//
// Every kernel-side buffer (shared-memory tiles, fragment registers) is a
// TrackedBuffer. Usage is counted per thread in ComplexHalf-sized units
// (4 bytes), so the executor can report the peak auxiliary storage of each
// worker and tests can assert the in-place contract.

#include <cstddef>
#include <vector>

#include "tcfft/half.hpp"

namespace tcfft {

namespace scratch {

// Current and peak tracked units on the calling thread.
std::size_t current();
std::size_t peak();
void reset_peak();

void acquire(std::size_t bytes);
void release(std::size_t bytes);

}  // namespace scratch

template <class T>
class TrackedBuffer {
 public:
  TrackedBuffer() = default;
  explicit TrackedBuffer(std::size_t n, const T& value = T{}) : data_(n, value) {
    scratch::acquire(bytes());
  }
  TrackedBuffer(const TrackedBuffer& other) : data_(other.data_) { scratch::acquire(bytes()); }
  TrackedBuffer(TrackedBuffer&& other) noexcept : data_(std::move(other.data_)) {
    other.data_.clear();
  }
  TrackedBuffer& operator=(TrackedBuffer other) noexcept {
    std::swap(data_, other.data_);
    return *this;
  }
  ~TrackedBuffer() { scratch::release(bytes()); }

  std::size_t size() const { return data_.size(); }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

 private:
  std::size_t bytes() const { return data_.size() * sizeof(T); }

  std::vector<T> data_;
};

}  // namespace tcfft
