#pragma once

// Software binary16 (IEEE 754 half precision).
//
// All conversions into Half round to nearest, ties to even. NaNs are
// canonicalized to 0x7E00 (sign preserved); payloads are not kept.

#include <bit>
#include <compare>
#include <cstdint>

namespace tcfft {

class Half {
 public:
  constexpr Half() = default;

  static constexpr Half from_bits(std::uint16_t bits) {
    Half h;
    h.bits_ = bits;
    return h;
  }

  constexpr std::uint16_t bits() const { return bits_; }

  float to_float() const;
  double to_double() const { return static_cast<double>(to_float()); }
  explicit operator float() const { return to_float(); }
  explicit operator double() const { return to_double(); }

  constexpr bool is_nan() const {
    return (bits_ & 0x7C00u) == 0x7C00u && (bits_ & 0x03FFu) != 0;
  }
  constexpr bool is_inf() const { return (bits_ & 0x7FFFu) == 0x7C00u; }
  constexpr bool signbit() const { return (bits_ & 0x8000u) != 0; }

  // Exact: flips the sign bit.
  constexpr Half operator-() const { return from_bits(bits_ ^ 0x8000u); }

  // Bitwise identity (+0 != -0, NaN == NaN with equal bits).
  friend constexpr bool operator==(Half a, Half b) = default;

 private:
  std::uint16_t bits_ = 0;
};

inline constexpr Half kHalfZero = Half::from_bits(0x0000);
inline constexpr Half kHalfOne = Half::from_bits(0x3C00);
inline constexpr Half kHalfMax = Half::from_bits(0x7BFF);  // 65504
inline constexpr Half kHalfInf = Half::from_bits(0x7C00);
inline constexpr Half kHalfNaN = Half::from_bits(0x7E00);

// Nearest binary16 value to x, ties to even. Overflow gives signed infinity.
Half round_to_half(double x);

inline Half to_half(float x) { return round_to_half(static_cast<double>(x)); }

// Correctly rounded scalar arithmetic (exact in real-64, one rounding).
inline Half add_half(Half a, Half b) { return round_to_half(a.to_double() + b.to_double()); }
inline Half sub_half(Half a, Half b) { return round_to_half(a.to_double() - b.to_double()); }

// IEEE total order without NaN; -0 < +0.
std::partial_ordering total_order(Half a, Half b);

struct ComplexHalf {
  Half re;
  Half im;

  friend constexpr bool operator==(ComplexHalf, ComplexHalf) = default;
};

static_assert(sizeof(ComplexHalf) == 4);

inline ComplexHalf make_complex_half(double re, double im) {
  return {round_to_half(re), round_to_half(im)};
}

// Products and the sum/difference are evaluated in real-32, then each
// component is rounded once to Half. Products of two halves are exact in
// real-32, so each component carries at most a real-32 rounding of the
// exact sum followed by the final Half rounding.
ComplexHalf complex_mul_half(ComplexHalf a, ComplexHalf b);

inline ComplexHalf complex_add_half(ComplexHalf a, ComplexHalf b) {
  return {add_half(a.re, b.re), add_half(a.im, b.im)};
}
inline ComplexHalf complex_sub_half(ComplexHalf a, ComplexHalf b) {
  return {sub_half(a.re, b.re), sub_half(a.im, b.im)};
}

}  // namespace tcfft
