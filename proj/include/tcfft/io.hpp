#pragma once

// TCF1 binary format (all integers little-endian):
//
//   bytes 0-3   magic "TCF1"
//   u32         dims (1 or 2)
//   u32         nx
//   u32         ny (1 for 1D data)
//   u32         batch
//   then batch * nx * ny complex values, each as two binary16 words (re, im).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tcfft/half.hpp"

namespace tcfft {

struct TcfHeader {
  std::uint32_t dims = 1;
  std::uint32_t nx = 0;
  std::uint32_t ny = 1;
  std::uint32_t batch = 1;

  std::uint64_t element_count() const { return std::uint64_t{nx} * ny * batch; }
  friend bool operator==(const TcfHeader&, const TcfHeader&) = default;
};

struct TcfData {
  TcfHeader header;
  std::vector<ComplexHalf> values;
};

// IoError on stream failures, bad magic, bad dims or a short payload.
void write_tcf(std::ostream& os, const TcfHeader& header, std::span<const ComplexHalf> values);
TcfData read_tcf(std::istream& is);

void write_tcf_file(const std::string& path, const TcfHeader& header, std::span<const ComplexHalf> values);
TcfData read_tcf_file(const std::string& path);

}  // namespace tcfft
