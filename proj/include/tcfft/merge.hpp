#pragma once

// Merging kernels.
//
// A merging step combines r sub-FFTs of length n2 into one FFT of length
// n = r * n2. Viewing the r sub-FFTs as the rows of an r x n2 matrix X_in,
// the merged result is X_out = F_r * (T ⊙ X_in), with F_r the radix-r DFT
// matrix and T(m, k) = W_n^{mk}. Data is merged in place: row m of X_in and
// row m of X_out both live at offset m * n2 of the block.
//
// Radix-16 steps run on the emulated MMA primitive, radix-2/4 steps on the
// scalar path. A merging kernel of radix R chains such sub-merges (all 16s
// first, then a 2, 4 or 4*2 remainder).

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tcfft/half.hpp"
#include "tcfft/mma.hpp"
#include "tcfft/scratch.hpp"
#include "tcfft/twiddle.hpp"

namespace tcfft {

// ---------------------------------------------------------------------------
// Precision policies

struct HalfPrecision {
  using Complex = ComplexHalf;
  using Operand = Half;
  using Accum = float;

  static Complex twiddle(std::uint64_t m, std::uint64_t k, std::uint64_t n) { return twiddle_at(m, k, n); }
  static Complex mul(Complex a, Complex b) { return complex_mul_half(a, b); }
  static Operand re(Complex c) { return c.re; }
  static Operand im(Complex c) { return c.im; }
  static Complex make(Operand re, Operand im) { return {re, im}; }
  static double wide(Operand v) { return v.to_double(); }
  static Operand narrow(double v) { return round_to_half(v); }
};

// FP16 accumulation inside mma_sync, for error studies.
struct HalfPrecisionFp16Accum : HalfPrecision {
  using Accum = Half;
};

// All arithmetic in real-64; the algebraic reference configuration.
struct DoublePrecision {
  using Complex = std::complex<double>;
  using Operand = double;
  using Accum = double;

  static Complex twiddle(std::uint64_t m, std::uint64_t k, std::uint64_t n) { return twiddle64(m, k, n); }
  static Complex mul(Complex a, Complex b) { return a * b; }
  static Operand re(Complex c) { return c.real(); }
  static Operand im(Complex c) { return c.imag(); }
  static Complex make(Operand re, Operand im) { return {re, im}; }
  static double wide(Operand v) { return v; }
  static Operand narrow(double v) { return v; }
};

// ---------------------------------------------------------------------------
// Kernel catalog

enum class SubMergePath { mma, scalar };

struct SubMerge {
  int radix = 0;
  SubMergePath path = SubMergePath::scalar;
};

struct MergeKernel {
  int radix = 0;
  std::vector<SubMerge> sub_merges;
};

// Where data produced by one sub-merge is exchanged before the next one:
// inside one 16x16 tile group, inside the kernel segment, or through
// global memory (between kernels).
enum class ExchangeTier { warp, block, global };

// Radices 2^k for k in [1, 13].
bool is_catalog_radix(int radix);
// 16s first, then the remainder as [2], [4] or [4, 2].
std::vector<int> sub_radices(int radix);
MergeKernel make_merge_kernel(int radix);

// Tier of the exchange after each sub-merge when the kernel starts from
// sub-FFTs of length n2. The last entry is always global.
std::vector<ExchangeTier> exchange_tiers(const MergeKernel& kernel, std::size_t n2);

// ---------------------------------------------------------------------------
// Access pattern

template <class T>
struct StridedSpan {
  T* base = nullptr;
  std::size_t len = 0;
  std::ptrdiff_t stride = 1;

  StridedSpan() = default;
  StridedSpan(T* b, std::size_t n, std::ptrdiff_t s = 1) : base(b), len(n), stride(s) {}
  StridedSpan(std::span<T> s) : base(s.data()), len(s.size()), stride(1) {}  // NOLINT

  T& operator[](std::size_t i) const { return base[static_cast<std::ptrdiff_t>(i) * stride]; }
  StridedSpan sub(std::size_t offset, std::size_t count) const {
    return {base + static_cast<std::ptrdiff_t>(offset) * stride, count, stride};
  }
};

// A run of adjacent columns of one merging step. Within a block, adjacent
// columns are adjacent in memory on every row.
struct ColumnRun {
  std::size_t first = 0;
  std::size_t count = 0;

  friend bool operator==(ColumnRun, ColumnRun) = default;
};

// Splits `columns` into runs of min(continuous_size, columns) adjacent
// columns. continuous_size must be a power of two.
std::vector<ColumnRun> gather_continuous(std::size_t columns, int continuous_size);

// Memory offsets (within the segment) touched by a run of a radix-r step
// over sub-FFTs of length n2, ascending.
std::vector<std::size_t> run_positions(const ColumnRun& run, std::size_t n2, int radix);

inline constexpr std::int64_t kPadColumn = -1;
using TileColumns = std::array<std::int64_t, kTileDim>;

// Groups runs into 16-column MMA tiles. Runs of 16 or more columns are cut
// into consecutive tiles; shorter runs are interleaved so that tile t takes
// runs t, t + T, t + 2T, ... (T = number of tiles). Missing columns are
// padded with kPadColumn.
std::vector<TileColumns> assemble_tiles(std::span<const ColumnRun> runs);

// ---------------------------------------------------------------------------
// Execution

enum class TwiddleMode {
  fused,    // twiddle multiply while loading fragment elements (via calc_eid)
  unfused,  // materialize T tile, multiply in scratch memory, then load
};

struct MergeStats {
  std::uint64_t mma_calls = 0;
  std::uint64_t mma_columns = 0;         // columns merged by radix-16 steps
  std::uint64_t scalar_butterflies = 0;  // columns merged by radix-2/4 steps
  // Sub-merge invocations; a kernel applied to k segments counts k times.
  std::uint64_t radix16_steps = 0;
  std::uint64_t scalar_steps = 0;
  // Radix-2 equivalent butterflies: (r / 2) * log2(r) per column.
  std::uint64_t mma_work = 0;
  std::uint64_t scalar_work = 0;

  double mma_share() const {
    const auto total = mma_work + scalar_work;
    return total == 0 ? 0.0 : static_cast<double>(mma_work) / static_cast<double>(total);
  }
  MergeStats& operator+=(const MergeStats& o);
};

struct MergeOptions {
  std::shared_ptr<const FragmentMap> map = default_fragment_map();
  int continuous_size = 32;
  TwiddleMode twiddle = TwiddleMode::fused;
};

// Per-worker execution state: one emulated warp with its DFT-matrix
// fragments, work fragments and output tiles.
template <class P>
class MergeEngine {
 public:
  using Complex = typename P::Complex;
  using Operand = typename P::Operand;
  using Accum = typename P::Accum;

  explicit MergeEngine(MergeOptions options = {});

  const MergeOptions& options() const { return options_; }
  const MergeStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

  // Each step merges every block of length r * n2 in `seg`.
  void radix16_submerge(StridedSpan<Complex> seg, std::size_t n2);
  void radix2_submerge(StridedSpan<Complex> seg, std::size_t n2);
  void radix4_submerge(StridedSpan<Complex> seg, std::size_t n2);
  void submerge(int radix, StridedSpan<Complex> seg, std::size_t n2);

  // Runs the kernel's sub-merges in order on every kernel segment of
  // length radix * n2 in `seg`.
  void run_merge_kernel(const MergeKernel& kernel, StridedSpan<Complex> seg, std::size_t n2);

 private:
  void load_tile_fused(StridedSpan<Complex> seg, const TileColumns& cols, std::size_t n2);
  void load_tile_unfused(StridedSpan<Complex> seg, const TileColumns& cols, std::size_t n2);

  MergeOptions options_;
  Warp warp_;
  Fragment<Operand> f_re_;
  Fragment<Operand> f_im_;
  Fragment<Operand> f_im_neg_;
  Fragment<Operand> x_re_;
  Fragment<Operand> x_im_;
  Fragment<Accum> zero_;
  Fragment<Accum> d_re_;
  Fragment<Accum> d_im_;
  TrackedBuffer<Operand> out_re_;
  TrackedBuffer<Operand> out_im_;
  MergeStats stats_;
};

extern template class MergeEngine<HalfPrecision>;
extern template class MergeEngine<HalfPrecisionFp16Accum>;
extern template class MergeEngine<DoublePrecision>;

}  // namespace tcfft
