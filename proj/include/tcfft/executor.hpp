#pragma once

// Plan execution over batched, strided complex data.
//
// Each sequence is digit-reversed once under the schedule's sub-radix
// decomposition, then merged in place kernel by kernel; the result is the
// forward DFT in natural order. 2D transforms run the contiguous dimension
// (rows) first and then the strided dimension (columns) directly on strided
// views.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "tcfft/error.hpp"
#include "tcfft/half.hpp"
#include "tcfft/merge.hpp"
#include "tcfft/plan.hpp"

namespace tcfft {

// Strided view over a flat buffer: element i of sequence b lives at
// buffer[b * batch_stride + i * stride].
template <class T>
class BatchedTensor {
 public:
  // batch_stride = 0 means len * stride (back-to-back sequences).
  BatchedTensor(std::span<T> buffer, std::size_t batch, std::size_t len, std::size_t stride = 1,
                std::size_t batch_stride = 0)
      : buffer_(buffer),
        batch_(batch),
        len_(len),
        stride_(stride),
        batch_stride_(batch_stride == 0 ? len * stride : batch_stride) {
    if (batch == 0 || len == 0 || stride == 0) throw ShapeMismatch("empty batched tensor");
    const std::size_t last = batch_stride_ * (batch_ - 1) + stride_ * (len_ - 1);
    if (last >= buffer_.size()) throw ShapeMismatch("buffer too small for batched tensor view");
    const bool sequences_disjoint = batch_ == 1 || batch_stride_ >= stride_ * len_;
    const bool interleaved = len_ == 1 || (stride_ >= batch_stride_ * batch_ && batch_stride_ > 0);
    if (!sequences_disjoint && !interleaved) throw ShapeMismatch("batched tensor elements alias");
  }

  std::span<T> buffer() const { return buffer_; }
  std::size_t batch() const { return batch_; }
  std::size_t len() const { return len_; }
  std::size_t stride() const { return stride_; }
  std::size_t batch_stride() const { return batch_stride_; }

  T& at(std::size_t b, std::size_t i) const { return buffer_[b * batch_stride_ + i * stride_]; }
  StridedSpan<T> sequence(std::size_t b) const {
    return {buffer_.data() + b * batch_stride_, len_, static_cast<std::ptrdiff_t>(stride_)};
  }

 private:
  std::span<T> buffer_;
  std::size_t batch_;
  std::size_t len_;
  std::size_t stride_;
  std::size_t batch_stride_;
};

enum class AccumulatePrecision { fp32, fp16 };

struct ExecOptions {
  std::shared_ptr<const FragmentMap> map = default_fragment_map();
  TwiddleMode twiddle = TwiddleMode::fused;
  AccumulatePrecision accumulate = AccumulatePrecision::fp32;
  int workers = 1;
};

struct ExecStats {
  MergeStats merge;
  // Largest auxiliary storage held by any worker, in ComplexHalf units.
  std::size_t peak_scratch = 0;
};

// Sub-radix digits of a kernel schedule, in merge order.
std::vector<int> flatten_schedule(std::span<const int> schedule);

// Position that input index i occupies after digit reversal: writing
// i = a_m + r_m * (a_{m-1} + r_{m-1} * (... a_1)), the position is
// a_1 + r_1 * (a_2 + r_2 * (... a_m)).
std::size_t digit_reversed_position(std::size_t i, std::span<const int> radices);

// In place. Radices must be powers of two whose product is the sequence
// length; the permutation is applied as a series of address-bit swaps.
template <class T>
void digit_reversal_permute(StridedSpan<T> seq, std::span<const int> radices);

template <class T>
void digit_reversal_permute(const BatchedTensor<T>& data, std::span<const int> radices) {
  for (std::size_t b = 0; b < data.batch(); ++b) digit_reversal_permute(data.sequence(b), radices);
}

// Which sub-radix digits have been merged so far.
class LayoutState {
 public:
  LayoutState(std::vector<int> digits, int continuous_size);

  std::span<const int> merged() const { return {digits_.data(), merged_}; }
  std::span<const int> pending() const { return {digits_.data() + merged_, digits_.size() - merged_}; }
  int continuous_size() const { return continuous_size_; }
  // Length of the sub-FFTs currently held in the buffer.
  std::size_t sub_length() const;
  bool done() const { return merged_ == digits_.size(); }

  // ContractError unless `radix` is the next pending digit.
  void advance(int radix);

 private:
  std::vector<int> digits_;
  std::size_t merged_ = 0;
  int continuous_size_;
};

// Runs a 1D schedule over every sequence of `data` (any stride).
ExecStats strided_pass(std::span<const int> schedule, const BatchedTensor<ComplexHalf>& data, int continuous_size,
                       const ExecOptions& options = {});
ExecStats strided_pass(std::span<const int> schedule, const BatchedTensor<std::complex<double>>& data,
                       int continuous_size, const ExecOptions& options = {});

// Forward DFT of every sequence, in place. For 2D plans each sequence is a
// row-major nx x ny matrix (len = nx * ny). Throws ContractError for an
// uninitialized plan or a precision mismatch, ShapeMismatch for data that
// does not match the plan.
ExecStats execute(const Plan& plan, const BatchedTensor<ComplexHalf>& data, const ExecOptions& options = {});
ExecStats execute(const Plan& plan, const BatchedTensor<std::complex<double>>& data,
                  const ExecOptions& options = {});

}  // namespace tcfft
