#include "tcfft/io.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include "tcfft/error.hpp"

namespace tcfft {

namespace {

constexpr std::array<char, 4> kMagic = {'T', 'C', 'F', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                                 static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  os.write(b.data(), b.size());
}

void put_u16(std::ostream& os, std::uint16_t v) {
  const std::array<char, 2> b = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
  os.write(b.data(), b.size());
}

std::uint32_t get_u32(std::istream& is) {
  std::array<unsigned char, 4> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), b.size())) throw IoError("truncated TCF1 header");
  return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) | (std::uint32_t{b[3]} << 24);
}

void check_header(const TcfHeader& h) {
  if (h.dims != 1 && h.dims != 2) throw IoError("TCF1 dims must be 1 or 2");
  if (h.nx == 0 || h.ny == 0 || h.batch == 0) throw IoError("TCF1 sizes must be positive");
  if (h.dims == 1 && h.ny != 1) throw IoError("TCF1 1D data must have ny = 1");
}

}  // namespace

void write_tcf(std::ostream& os, const TcfHeader& header, std::span<const ComplexHalf> values) {
  check_header(header);
  if (values.size() != header.element_count()) throw IoError("TCF1 payload does not match header");
  os.write(kMagic.data(), kMagic.size());
  put_u32(os, header.dims);
  put_u32(os, header.nx);
  put_u32(os, header.ny);
  put_u32(os, header.batch);
  for (const ComplexHalf& v : values) {
    put_u16(os, v.re.bits());
    put_u16(os, v.im.bits());
  }
  if (!os) throw IoError("failed to write TCF1 data");
}

TcfData read_tcf(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw IoError("not a TCF1 file");
  TcfData d;
  d.header.dims = get_u32(is);
  d.header.nx = get_u32(is);
  d.header.ny = get_u32(is);
  d.header.batch = get_u32(is);
  check_header(d.header);
  const auto count = d.header.element_count();
  std::vector<unsigned char> raw(count * 4);
  if (!is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
    throw IoError("truncated TCF1 payload");
  }
  d.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned char* p = raw.data() + 4 * i;
    d.values[i].re = Half::from_bits(static_cast<std::uint16_t>(p[0] | (p[1] << 8)));
    d.values[i].im = Half::from_bits(static_cast<std::uint16_t>(p[2] | (p[3] << 8)));
  }
  return d;
}

void write_tcf_file(const std::string& path, const TcfHeader& header, std::span<const ComplexHalf> values) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_tcf(os, header, values);
}

TcfData read_tcf_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_tcf(is);
}

}  // namespace tcfft
