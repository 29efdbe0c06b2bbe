#pragma once

// Double-precision reference transforms and accuracy / throughput metrics.

#include <complex>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tcfft/half.hpp"

namespace tcfft {

using cplx = std::complex<double>;

// Direct O(N^2) summation with Kahan compensation.
std::vector<cplx> naive_dft(std::span<const cplx> x);

// Recursive radix-2 Cooley-Tukey in real-64. ArgumentError unless the
// length is a power of two.
std::vector<cplx> reference_fft64(std::span<const cplx> x);

// Row-major nx x ny 2D transforms built from the 1D ones.
std::vector<cplx> naive_dft_2d(std::span<const cplx> x, std::size_t nx, std::size_t ny);
std::vector<cplx> reference_fft64_2d(std::span<const cplx> x, std::size_t nx, std::size_t ny);

std::vector<cplx> widen(std::span<const ComplexHalf> x);
std::vector<ComplexHalf> narrow_to_half(std::span<const cplx> x);

// Mean over bins of |ref[i] - x[i]| / max(|ref[i]|, eps) with
// eps = 1e-6 * max_i |ref[i]|. ShapeMismatch on length mismatch.
double relative_error(std::span<const ComplexHalf> x, std::span<const cplx> ref);
double relative_error(std::span<const cplx> x, std::span<const cplx> ref);

// Radix-2 equivalent TFLOPS: 6 * 2 * log2(n) * n * batch * repeats /
// (seconds * 1e12). ArgumentError for non-positive inputs.
double radix2_equiv_tflops(std::size_t n, std::size_t batch, std::size_t repeats, double seconds);
// Radix-2 equivalent flops of one execution (n = total points per sequence).
double radix2_equiv_flops(std::size_t n, std::size_t batch);

struct ErrorReport {
  int dims = 1;
  std::size_t n = 0;
  std::size_t ny = 1;
  std::size_t batch = 0;
  std::vector<double> per_sequence;
  double mean_relative_error = 0.0;
  double std = 0.0;  // population standard deviation over sequences
};

ErrorReport make_error_report(int dims, std::size_t n, std::size_t ny, std::vector<double> per_sequence);

struct PerfReport {
  int dims = 1;
  std::size_t n = 0;
  std::size_t ny = 1;
  std::size_t batch = 0;
  std::size_t repeats = 0;
  double total_time = 0.0;  // seconds
  double flops_per_exec = 0.0;
  double tflops = 0.0;
};

PerfReport make_perf_report(int dims, std::size_t n, std::size_t ny, std::size_t batch, std::size_t repeats,
                            double seconds);

// CSV: kind,n,ny,batch,metric,value
inline constexpr const char* kCsvHeader = "kind,n,ny,batch,metric,value";
void write_csv_rows(std::ostream& os, const ErrorReport& report);
void write_csv_rows(std::ostream& os, const PerfReport& report);

}  // namespace tcfft
