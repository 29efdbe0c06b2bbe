#include "tcfft/half.hpp"

#include <array>
#include <cmath>

namespace tcfft {

namespace {

float decode(std::uint16_t bits) {
  const std::uint32_t sign = (bits & 0x8000u) << 16;
  const std::uint32_t exp = (bits >> 10) & 0x1Fu;
  const std::uint32_t man = bits & 0x3FFu;
  if (exp == 0x1F) {
    return std::bit_cast<float>(sign | 0x7F800000u | (man << 13));
  }
  if (exp == 0) {
    // subnormal or zero: man * 2^-24, exact in float
    const float mag = static_cast<float>(man) * 0x1p-24f;
    return sign ? -mag : mag;
  }
  return std::bit_cast<float>(sign | ((exp + 112u) << 23) | (man << 13));
}

const std::array<float, 65536>& decode_table() {
  static const auto table = [] {
    std::array<float, 65536> t{};
    for (std::uint32_t b = 0; b < 65536; ++b) t[b] = decode(static_cast<std::uint16_t>(b));
    return t;
  }();
  return table;
}

}  // namespace

float Half::to_float() const { return decode_table()[bits_]; }

Half round_to_half(double x) {
  const auto u = std::bit_cast<std::uint64_t>(x);
  const auto sign = static_cast<std::uint16_t>((u >> 48) & 0x8000u);
  const int exp = static_cast<int>((u >> 52) & 0x7FF);
  const std::uint64_t man = u & ((std::uint64_t{1} << 52) - 1);

  if (exp == 0x7FF) {
    return Half::from_bits(sign | (man ? 0x7E00u : 0x7C00u));
  }
  if (exp == 0) {
    // double subnormals are far below half's smallest subnormal
    return Half::from_bits(sign);
  }

  const int e = exp - 1023;
  if (e > 15) return Half::from_bits(sign | 0x7C00u);

  const std::uint64_t full = man | (std::uint64_t{1} << 52);
  // Normal results keep 11 significant bits; subnormals are quantized to 2^-24.
  const int shift = e >= -14 ? 42 : 28 - e;
  if (shift > 53) return Half::from_bits(sign);  // below half of 2^-24

  std::uint64_t q = full >> shift;
  const std::uint64_t rem = full & ((std::uint64_t{1} << shift) - 1);
  const std::uint64_t halfway = std::uint64_t{1} << (shift - 1);
  if (rem > halfway || (rem == halfway && (q & 1))) ++q;

  if (e >= -14) {
    int biased = e + 15;
    if (q == 2048) {
      q = 1024;
      ++biased;
    }
    if (biased >= 31) return Half::from_bits(sign | 0x7C00u);
    return Half::from_bits(static_cast<std::uint16_t>(sign | (biased << 10) | (q - 1024)));
  }
  // q == 1024 rolls into the smallest normal encoding naturally
  return Half::from_bits(static_cast<std::uint16_t>(sign | q));
}

std::partial_ordering total_order(Half a, Half b) {
  if (a.is_nan() || b.is_nan()) return std::partial_ordering::unordered;
  const auto key = [](Half h) {
    const int mag = h.bits() & 0x7FFF;
    return h.signbit() ? -mag - 1 : mag;
  };
  return key(a) <=> key(b);
}

ComplexHalf complex_mul_half(ComplexHalf a, ComplexHalf b) {
  const float ar = a.re.to_float();
  const float ai = a.im.to_float();
  const float br = b.re.to_float();
  const float bi = b.im.to_float();
  const float prr = ar * br;
  const float pii = ai * bi;
  const float pri = ar * bi;
  const float pir = ai * br;
  const float re = prr - pii;
  const float im = pri + pir;
  return {to_half(re), to_half(im)};
}

}  // namespace tcfft
