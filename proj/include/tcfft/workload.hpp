#pragma once

// Seeded test inputs and the verify / bench drivers shared by the CLI, the
// acceptance suite and the Python bindings.

#include <cstdint>
#include <vector>

#include "tcfft/executor.hpp"
#include "tcfft/oracle.hpp"
#include "tcfft/plan.hpp"

namespace tcfft {

// Real and imaginary parts uniform in [-1, 1], rounded to Half.
std::vector<ComplexHalf> random_half_input(std::size_t count, std::uint64_t seed);

// Runs the plan on seeded inputs and compares every sequence against the
// real-64 reference transform of the same (Half-valued) input.
ErrorReport verify_plan(const Plan& plan, std::uint64_t seed, const ExecOptions& options = {});

// Repeats execute until at least `min_seconds` of execute time has been
// measured (at least once). Only execute is timed; the input is restored
// between repeats outside the timed region.
PerfReport bench_plan(const Plan& plan, std::uint64_t seed, double min_seconds, const ExecOptions& options = {});

// Transforms Half data of a plan's shape (batch * sequence_length values),
// in place.
ExecStats transform_half(const Plan& plan, std::vector<ComplexHalf>& data, const ExecOptions& options = {});

}  // namespace tcfft
