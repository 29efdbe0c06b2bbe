#pragma once

// DFT matrices F_n1 and twiddle factors W_n^{mk} = exp(-2*pi*i*mk/n).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tcfft/half.hpp"

namespace tcfft {

// Real-64 root of unity. The exponent m*k is reduced mod n in exact integer
// arithmetic before the trig call.
std::complex<double> twiddle64(std::uint64_t m, std::uint64_t k, std::uint64_t n);

// twiddle64 rounded componentwise to Half.
ComplexHalf twiddle_at(std::uint64_t m, std::uint64_t k, std::uint64_t n);

struct DftMatrix {
  int n1 = 0;
  std::vector<Half> re;  // row-major n1 x n1
  std::vector<Half> im;

  ComplexHalf at(int j, int k) const {
    const auto idx = static_cast<std::size_t>(j * n1 + k);
    return {re[idx], im[idx]};
  }
};

// n1 in {2, 4, 16}; UnsupportedSize otherwise.
DftMatrix dft_matrix(int n1);
// Unrounded version (row-major), any n1 >= 1.
std::vector<std::complex<double>> dft_matrix64(int n1);

struct TwiddleTile {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t n = 0;
  std::vector<ComplexHalf> entries;  // row-major n1 x n2, entry (m, k) = W_n^{mk}

  ComplexHalf at(std::size_t m, std::size_t k) const { return entries[m * n2 + k]; }
};

// ShapeMismatch unless n == n1 * n2.
TwiddleTile twiddle_tile(std::size_t n1, std::size_t n2, std::size_t n);

}  // namespace tcfft
