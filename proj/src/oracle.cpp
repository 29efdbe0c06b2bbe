#include "tcfft/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>

#include "tcfft/error.hpp"

namespace tcfft {

namespace {

// exp(-2*pi*i*r/n), r already reduced mod n. Kept separate from the
// library's twiddle generator so the oracle stays independent.
cplx root(std::size_t r, std::size_t n) {
  return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
}

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

void fft_rec(std::span<const cplx> x, std::size_t stride, std::span<cplx> out) {
  const std::size_t n = out.size();
  if (n == 1) {
    out[0] = x[0];
    return;
  }
  const std::size_t h = n / 2;
  fft_rec(x, stride * 2, out.subspan(0, h));
  fft_rec(x.subspan(stride), stride * 2, out.subspan(h, h));
  for (std::size_t k = 0; k < h; ++k) {
    const cplx e = out[k];
    const cplx o = out[k + h] * root(k, n);
    out[k] = e + o;
    out[k + h] = e - o;
  }
}

template <class Fn>
std::vector<cplx> separable_2d(std::span<const cplx> x, std::size_t nx, std::size_t ny, Fn&& fn) {
  if (x.size() != nx * ny) throw ShapeMismatch("2D input size mismatch");
  std::vector<cplx> out(x.begin(), x.end());
  for (std::size_t r = 0; r < nx; ++r) {
    const auto row = fn(std::span<const cplx>(out.data() + r * ny, ny));
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(r * ny));
  }
  std::vector<cplx> col(nx);
  for (std::size_t c = 0; c < ny; ++c) {
    for (std::size_t r = 0; r < nx; ++r) col[r] = out[r * ny + c];
    const auto res = fn(std::span<const cplx>(col));
    for (std::size_t r = 0; r < nx; ++r) out[r * ny + c] = res[r];
  }
  return out;
}

template <class X>
double relative_error_impl(std::span<const X> x, std::span<const cplx> ref, auto&& to_cplx) {
  if (x.size() != ref.size()) throw ShapeMismatch("relative_error: length mismatch");
  if (ref.empty()) return 0.0;
  double peak = 0.0;
  for (const cplx& r : ref) peak = std::max(peak, std::abs(r));
  const double eps = 1e-6 * peak;
  double sum = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double denom = std::max(std::abs(ref[i]), eps);
    if (denom == 0.0) continue;  // all-zero reference
    sum += std::abs(ref[i] - to_cplx(x[i])) / denom;
  }
  return sum / static_cast<double>(ref.size());
}

}  // namespace

std::vector<cplx> naive_dft(std::span<const cplx> x) {
  const std::size_t n = x.size();
  std::vector<cplx> table(n);
  for (std::size_t j = 0; j < n; ++j) table[j] = root(j, n);
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Kahan re;
    Kahan im;
    std::size_t idx = 0;  // (j * k) mod n
    for (std::size_t j = 0; j < n; ++j) {
      const cplx p = x[j] * table[idx];
      re.add(p.real());
      im.add(p.imag());
      idx += k;
      if (idx >= n) idx -= n;
    }
    out[k] = {re.sum, im.sum};
  }
  return out;
}

std::vector<cplx> reference_fft64(std::span<const cplx> x) {
  if (x.empty() || !std::has_single_bit(x.size())) {
    throw ArgumentError("reference_fft64 needs a power-of-two length");
  }
  std::vector<cplx> out(x.size());
  fft_rec(x, 1, out);
  return out;
}

std::vector<cplx> naive_dft_2d(std::span<const cplx> x, std::size_t nx, std::size_t ny) {
  return separable_2d(x, nx, ny, [](std::span<const cplx> v) { return naive_dft(v); });
}

std::vector<cplx> reference_fft64_2d(std::span<const cplx> x, std::size_t nx, std::size_t ny) {
  return separable_2d(x, nx, ny, [](std::span<const cplx> v) { return reference_fft64(v); });
}

std::vector<cplx> widen(std::span<const ComplexHalf> x) {
  std::vector<cplx> out;
  out.reserve(x.size());
  for (const ComplexHalf& v : x) out.emplace_back(v.re.to_double(), v.im.to_double());
  return out;
}

std::vector<ComplexHalf> narrow_to_half(std::span<const cplx> x) {
  std::vector<ComplexHalf> out;
  out.reserve(x.size());
  for (const cplx& v : x) out.push_back(make_complex_half(v.real(), v.imag()));
  return out;
}

double relative_error(std::span<const ComplexHalf> x, std::span<const cplx> ref) {
  return relative_error_impl(x, ref, [](ComplexHalf v) { return cplx(v.re.to_double(), v.im.to_double()); });
}

double relative_error(std::span<const cplx> x, std::span<const cplx> ref) {
  return relative_error_impl(x, ref, [](const cplx& v) { return v; });
}

double radix2_equiv_flops(std::size_t n, std::size_t batch) {
  return 6.0 * 2.0 * std::log2(static_cast<double>(n)) * static_cast<double>(n) * static_cast<double>(batch);
}

double radix2_equiv_tflops(std::size_t n, std::size_t batch, std::size_t repeats, double seconds) {
  if (n == 0 || batch == 0 || repeats == 0 || !(seconds > 0.0)) {
    throw ArgumentError("radix2_equiv_tflops needs positive size, batch, repeats and time");
  }
  return radix2_equiv_flops(n, batch) * static_cast<double>(repeats) / (seconds * 1e12);
}

ErrorReport make_error_report(int dims, std::size_t n, std::size_t ny, std::vector<double> per_sequence) {
  ErrorReport r;
  r.dims = dims;
  r.n = n;
  r.ny = ny;
  r.batch = per_sequence.size();
  r.per_sequence = std::move(per_sequence);
  if (!r.per_sequence.empty()) {
    const double count = static_cast<double>(r.per_sequence.size());
    r.mean_relative_error = std::accumulate(r.per_sequence.begin(), r.per_sequence.end(), 0.0) / count;
    double var = 0.0;
    for (const double e : r.per_sequence) var += (e - r.mean_relative_error) * (e - r.mean_relative_error);
    r.std = std::sqrt(var / count);
  }
  return r;
}

PerfReport make_perf_report(int dims, std::size_t n, std::size_t ny, std::size_t batch, std::size_t repeats,
                            double seconds) {
  PerfReport r;
  r.dims = dims;
  r.n = n;
  r.ny = ny;
  r.batch = batch;
  r.repeats = repeats;
  r.total_time = seconds;
  const std::size_t points = dims == 2 ? n * ny : n;
  r.flops_per_exec = radix2_equiv_flops(points, batch);
  r.tflops = radix2_equiv_tflops(points, batch, repeats, seconds);
  return r;
}

namespace {

void row(std::ostream& os, int dims, std::size_t n, std::size_t ny, std::size_t batch, const char* metric,
         double value) {
  os << (dims == 2 ? "2d" : "1d") << ',' << n << ',' << ny << ',' << batch << ',' << metric << ','
     << std::setprecision(10) << value << '\n';
}

}  // namespace

void write_csv_rows(std::ostream& os, const ErrorReport& r) {
  row(os, r.dims, r.n, r.ny, r.batch, "mean_relative_error", r.mean_relative_error);
  row(os, r.dims, r.n, r.ny, r.batch, "std_relative_error", r.std);
}

void write_csv_rows(std::ostream& os, const PerfReport& r) {
  row(os, r.dims, r.n, r.ny, r.batch, "flops_per_exec", r.flops_per_exec);
  row(os, r.dims, r.n, r.ny, r.batch, "repeats", static_cast<double>(r.repeats));
  row(os, r.dims, r.n, r.ny, r.batch, "total_time_s", r.total_time);
  row(os, r.dims, r.n, r.ny, r.batch, "emulated_tflops", r.tflops);
}

}  // namespace tcfft
