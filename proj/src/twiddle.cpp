#include "tcfft/twiddle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tcfft/error.hpp"

namespace tcfft {

std::complex<double> twiddle64(std::uint64_t m, std::uint64_t k, std::uint64_t n) {
  const std::uint64_t r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(m) * k) % n);
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
  return {std::cos(angle), -std::sin(angle)};
}

ComplexHalf twiddle_at(std::uint64_t m, std::uint64_t k, std::uint64_t n) {
  const auto w = twiddle64(m, k, n);
  return {round_to_half(w.real()), round_to_half(w.imag())};
}

DftMatrix dft_matrix(int n1) {
  if (n1 != 2 && n1 != 4 && n1 != 16) {
    throw UnsupportedSize("no DFT matrix for radix " + std::to_string(n1));
  }
  DftMatrix f;
  f.n1 = n1;
  f.re.resize(static_cast<std::size_t>(n1 * n1));
  f.im.resize(f.re.size());
  for (int j = 0; j < n1; ++j) {
    for (int k = 0; k < n1; ++k) {
      const ComplexHalf w = twiddle_at(static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(k),
                                       static_cast<std::uint64_t>(n1));
      f.re[static_cast<std::size_t>(j * n1 + k)] = w.re;
      f.im[static_cast<std::size_t>(j * n1 + k)] = w.im;
    }
  }
  return f;
}

std::vector<std::complex<double>> dft_matrix64(int n1) {
  std::vector<std::complex<double>> f(static_cast<std::size_t>(n1 * n1));
  for (int j = 0; j < n1; ++j) {
    for (int k = 0; k < n1; ++k) {
      f[static_cast<std::size_t>(j * n1 + k)] =
          twiddle64(static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(n1));
    }
  }
  return f;
}

TwiddleTile twiddle_tile(std::size_t n1, std::size_t n2, std::size_t n) {
  if (n1 == 0 || n2 == 0 || n != n1 * n2) {
    throw ShapeMismatch("twiddle tile requires n == n1 * n2");
  }
  TwiddleTile t{n1, n2, n, {}};
  t.entries.reserve(n1 * n2);
  for (std::size_t m = 0; m < n1; ++m) {
    for (std::size_t k = 0; k < n2; ++k) t.entries.push_back(twiddle_at(m, k, n));
  }
  return t;
}

}  // namespace tcfft
