#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tcfft::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // check failed or runtime error
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string command;
  std::vector<std::size_t> sizes;
  std::size_t ny = 0;  // 0: same as nx for 2D
  std::size_t batch = 1;
  int dims = 1;
  std::string mode = "half";
  int continuous_size = 32;
  std::uint64_t seed = 1;
  std::string out;
  std::string in;
  double envelope_pct = 3.5;
  double min_time = 2.0;
  int workers = 1;
  std::string map = "default";
  std::string accumulate = "fp32";
};

// Entry point shared by the executable and the tests. args[0] is the
// program name. Diagnostics go to `err`, results to `out` unless --out is
// given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tcfft::cli
