#include "tcfft/plan.hpp"

#include <bit>

#include <json.hpp>

#include "tcfft/error.hpp"
#include "tcfft/merge.hpp"

namespace tcfft {

std::string to_string(PrecisionMode mode) { return mode == PrecisionMode::half ? "half" : "double"; }

PrecisionMode parse_precision(const std::string& s) {
  if (s == "half") return PrecisionMode::half;
  if (s == "double") return PrecisionMode::double_reference;
  throw ArgumentError("unknown precision mode '" + s + "'");
}

namespace {

void check_length(std::size_t n) {
  if (n < 2 || !std::has_single_bit(n)) {
    throw UnsupportedSize("unsupported size " + std::to_string(n) + ": need a power of two >= 2");
  }
}

void check_continuous_size(int cs) {
  if (cs != 4 && cs != 8 && cs != 16 && cs != 32 && cs != 64) {
    throw ArgumentError("continuous size must be one of 4, 8, 16, 32, 64");
  }
}

std::vector<int> resolve_schedule(std::size_t n, const std::optional<std::vector<int>>& override_) {
  if (!override_) return schedule_radices(n);
  std::size_t product = 1;
  for (const int r : *override_) {
    if (!is_catalog_radix(r)) throw ArgumentError("schedule override uses non-catalog radix " + std::to_string(r));
    product *= static_cast<std::size_t>(r);
  }
  if (product != n) throw ArgumentError("schedule override does not multiply to " + std::to_string(n));
  return *override_;
}

}  // namespace

std::vector<int> schedule_radices(std::size_t n) {
  check_length(n);
  std::vector<int> out;
  while (n > static_cast<std::size_t>(kMaxKernelRadix)) {
    out.push_back(kMaxKernelRadix);
    n /= kMaxKernelRadix;
  }
  out.push_back(static_cast<int>(n));
  return out;
}

Plan plan_1d(std::size_t nx, std::size_t batch, const PlanOptions& options) {
  check_length(nx);
  if (batch < 1) throw ArgumentError("batch must be >= 1");
  check_continuous_size(options.continuous_size);
  Plan p;
  p.dims = 1;
  p.nx = nx;
  p.batch = batch;
  p.schedule_x = resolve_schedule(nx, options.schedule_x);
  p.continuous_size = options.continuous_size;
  p.precision = options.precision;
  return p;
}

Plan plan_2d(std::size_t nx, std::size_t ny, std::size_t batch, const PlanOptions& options) {
  check_length(nx);
  check_length(ny);
  if (batch < 1) throw ArgumentError("batch must be >= 1");
  check_continuous_size(options.continuous_size);
  Plan p;
  p.dims = 2;
  p.nx = nx;
  p.ny = ny;
  p.batch = batch;
  p.schedule_x = resolve_schedule(nx, options.schedule_x);
  p.schedule_y = resolve_schedule(ny, options.schedule_y);
  p.continuous_size = options.continuous_size;
  p.precision = options.precision;
  return p;
}

std::string to_json(const Plan& plan) {
  nlohmann::ordered_json j;
  j["dims"] = plan.dims;
  j["nx"] = plan.nx;
  if (plan.dims == 2) j["ny"] = plan.ny;
  j["batch"] = plan.batch;
  j["schedule_x"] = plan.schedule_x;
  if (plan.dims == 2) j["schedule_y"] = plan.schedule_y;
  j["continuous_size"] = plan.continuous_size;
  j["precision"] = to_string(plan.precision);
  return j.dump();
}

std::size_t sequence_length(const Plan& plan) { return plan.dims == 2 ? plan.nx * plan.ny : plan.nx; }

}  // namespace tcfft
