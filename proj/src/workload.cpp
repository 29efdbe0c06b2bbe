#include "tcfft/workload.hpp"

#include <chrono>
#include <random>

#include "tcfft/error.hpp"

namespace tcfft {

std::vector<ComplexHalf> random_half_input(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<ComplexHalf> out(count);
  for (auto& v : out) {
    const double re = dist(rng);
    const double im = dist(rng);
    v = make_complex_half(re, im);
  }
  return out;
}

namespace {

std::vector<cplx> reference(const Plan& plan, std::span<const cplx> x) {
  return plan.dims == 2 ? reference_fft64_2d(x, plan.nx, plan.ny) : reference_fft64(x);
}

}  // namespace

ErrorReport verify_plan(const Plan& plan, std::uint64_t seed, const ExecOptions& options) {
  const std::size_t len = sequence_length(plan);
  const auto input = random_half_input(len * plan.batch, seed);
  std::vector<double> errors;
  errors.reserve(plan.batch);

  if (plan.precision == PrecisionMode::half) {
    std::vector<ComplexHalf> data = input;
    execute(plan, BatchedTensor<ComplexHalf>(std::span(data), plan.batch, len), options);
    for (std::size_t b = 0; b < plan.batch; ++b) {
      const auto x = widen(std::span(input).subspan(b * len, len));
      const auto ref = reference(plan, x);
      errors.push_back(relative_error(std::span<const ComplexHalf>(data).subspan(b * len, len), ref));
    }
  } else {
    std::vector<cplx> data = widen(input);
    const std::vector<cplx> original = data;
    execute(plan, BatchedTensor<cplx>(std::span(data), plan.batch, len), options);
    for (std::size_t b = 0; b < plan.batch; ++b) {
      const auto ref = reference(plan, std::span<const cplx>(original).subspan(b * len, len));
      errors.push_back(relative_error(std::span<const cplx>(data).subspan(b * len, len), ref));
    }
  }
  return make_error_report(plan.dims, plan.nx, plan.dims == 2 ? plan.ny : 1, std::move(errors));
}

namespace {

template <class T>
PerfReport bench_impl(const Plan& plan, const std::vector<T>& input, double min_seconds,
                      const ExecOptions& options) {
  using clock = std::chrono::steady_clock;
  const std::size_t len = sequence_length(plan);
  std::vector<T> data(input.size());
  std::size_t repeats = 0;
  clock::duration total{};
  do {
    data = input;
    const BatchedTensor<T> view(std::span<T>(data), plan.batch, len);
    const auto start = clock::now();
    execute(plan, view, options);
    total += clock::now() - start;
    ++repeats;
  } while (std::chrono::duration<double>(total).count() < min_seconds);
  const double seconds = std::max(std::chrono::duration<double>(total).count(), 1e-9);
  return make_perf_report(plan.dims, plan.nx, plan.dims == 2 ? plan.ny : 1, plan.batch, repeats, seconds);
}

}  // namespace

PerfReport bench_plan(const Plan& plan, std::uint64_t seed, double min_seconds, const ExecOptions& options) {
  const auto input = random_half_input(sequence_length(plan) * plan.batch, seed);
  if (plan.precision == PrecisionMode::half) return bench_impl(plan, input, min_seconds, options);
  return bench_impl(plan, widen(input), min_seconds, options);
}

ExecStats transform_half(const Plan& plan, std::vector<ComplexHalf>& data, const ExecOptions& options) {
  if (data.size() != sequence_length(plan) * plan.batch) throw ShapeMismatch("data size does not match the plan");
  return execute(plan, BatchedTensor<ComplexHalf>(std::span(data), plan.batch, sequence_length(plan)), options);
}

}  // namespace tcfft
