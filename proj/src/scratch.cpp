#include "tcfft/scratch.hpp"

#include <algorithm>

namespace tcfft::scratch {

namespace {

constexpr std::size_t kUnit = sizeof(ComplexHalf);

thread_local std::size_t g_bytes = 0;
thread_local std::size_t g_peak_bytes = 0;

std::size_t units(std::size_t bytes) { return (bytes + kUnit - 1) / kUnit; }

}  // namespace

std::size_t current() { return units(g_bytes); }
std::size_t peak() { return units(g_peak_bytes); }
void reset_peak() { g_peak_bytes = g_bytes; }

void acquire(std::size_t bytes) {
  g_bytes += bytes;
  g_peak_bytes = std::max(g_peak_bytes, g_bytes);
}

void release(std::size_t bytes) { g_bytes -= std::min(bytes, g_bytes); }

}  // namespace tcfft::scratch
