#pragma once

// Plans: validated radix schedules and layout parameters, fixed before
// execution and reusable across executions.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tcfft {

enum class PrecisionMode { half, double_reference };

std::string to_string(PrecisionMode mode);
PrecisionMode parse_precision(const std::string& s);

inline constexpr int kDefaultContinuousSize = 32;
inline constexpr int kMaxKernelRadix = 8192;

struct Plan {
  int dims = 0;  // 0 = uninitialized
  std::size_t nx = 0;
  std::size_t ny = 0;  // 2D only
  std::size_t batch = 0;
  std::vector<int> schedule_x;
  std::vector<int> schedule_y;  // 2D only
  int continuous_size = kDefaultContinuousSize;
  PrecisionMode precision = PrecisionMode::half;

  bool initialized() const { return dims == 1 || dims == 2; }
  friend bool operator==(const Plan&, const Plan&) = default;
};

struct PlanOptions {
  int continuous_size = kDefaultContinuousSize;
  PrecisionMode precision = PrecisionMode::half;
  // Schedule overrides for experiments; validated like generated ones.
  std::optional<std::vector<int>> schedule_x;
  std::optional<std::vector<int>> schedule_y;
};

// Greedy: emit 8192 while the remaining length exceeds 8192, then the
// remaining factor. UnsupportedSize unless n is a power of two >= 2.
std::vector<int> schedule_radices(std::size_t n);

// UnsupportedSize for bad lengths; ArgumentError for batch < 1, a bad
// continuous size or an invalid schedule override.
Plan plan_1d(std::size_t nx, std::size_t batch, const PlanOptions& options = {});
Plan plan_2d(std::size_t nx, std::size_t ny, std::size_t batch, const PlanOptions& options = {});

// Stable key order: dims, nx, [ny], batch, schedule_x, [schedule_y],
// continuous_size, precision.
std::string to_json(const Plan& plan);

// Total elements of one sequence (nx or nx * ny).
std::size_t sequence_length(const Plan& plan);

}  // namespace tcfft
