#include <doctest.h>

#include <random>

#include "tcfft/error.hpp"
#include "tcfft/twiddle.hpp"
#include "test_support.hpp"

using namespace tcfft;

namespace {

ComplexHalf rounded_root(std::uint64_t num, std::uint64_t den) {
  const auto w = testing::root(num, den);
  return testing::ch(w.real(), w.imag());
}

}  // namespace

TEST_SUITE("twiddle") {

TEST_CASE("twiddle examples") {
  for (std::uint64_t n : {2u, 16u, 256u, 8192u}) {
    for (std::uint64_t k = 0; k < 5; ++k) CHECK(testing::value_eq(twiddle_at(0, k, n), testing::ch(1, 0)));
    if (n >= 4) CHECK(testing::value_eq(twiddle_at(1, n / 4, n), testing::ch(0, -1)));
  }
  CHECK(testing::value_eq(twiddle_at(1, 4, 16), testing::ch(0, -1)));
  CHECK(testing::value_eq(twiddle_at(1, 1, 2), testing::ch(-1, 0)));
  const double theta = 2.0 * std::numbers::pi * 15.0 / 64.0;
  CHECK(twiddle_at(3, 5, 64) == testing::ch(std::cos(theta), -std::sin(theta)));
}

TEST_CASE("twiddles match a rounded real-64 root for many exponents") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20000; ++t) {
    const std::uint64_t n = std::uint64_t{1} << (1 + rng() % 27);
    const std::uint64_t m = rng() % 8192;
    const std::uint64_t k = rng() % n;
    REQUIRE(twiddle_at(m, k, n) == rounded_root(m * k, n));
  }
}

TEST_CASE("periodicity: twiddle(m, k, n) == twiddle(m*k mod n, 1, n)") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20000; ++t) {
    const std::uint64_t n = std::uint64_t{1} << (1 + rng() % 27);
    const std::uint64_t m = rng() >> 34;
    const std::uint64_t k = rng() >> 34;
    const auto r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(m) * k) % n);
    REQUIRE(twiddle_at(m, k, n) == twiddle_at(r, 1, n));
    REQUIRE(twiddle64(m, k, n) == twiddle64(r, 1, n));
  }
  // Exponents beyond 64 bits reduce exactly.
  const std::uint64_t big = std::uint64_t{1} << 40;
  CHECK(twiddle64(big * 3 + 5, big + 7, 64) == twiddle64(((5 * 7) % 64), 1, 64));
}

TEST_CASE("DFT matrices") {
  const DftMatrix f2 = dft_matrix(2);
  CHECK(testing::value_eq(f2.at(0, 0), testing::ch(1, 0)));
  CHECK(testing::value_eq(f2.at(0, 1), testing::ch(1, 0)));
  CHECK(testing::value_eq(f2.at(1, 0), testing::ch(1, 0)));
  CHECK(testing::value_eq(f2.at(1, 1), testing::ch(-1, 0)));

  const DftMatrix f4 = dft_matrix(4);
  CHECK(testing::value_eq(f4.at(1, 1), testing::ch(0, -1)));
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      for (const double c : {f4.at(j, k).re.to_double(), f4.at(j, k).im.to_double()}) {
        CHECK((c == 0.0 || c == 1.0 || c == -1.0));
      }
    }
  }

  const DftMatrix f16 = dft_matrix(16);
  CHECK(testing::value_eq(f16.at(1, 4), testing::ch(0, -1)));
  CHECK(testing::value_eq(f16.at(8, 2), testing::ch(1, 0)));
  for (int j = 0; j < 16; ++j) {
    for (int k = 0; k < 16; ++k) {
      REQUIRE(f16.at(j, k) == rounded_root(static_cast<std::uint64_t>(j * k), 16));
      REQUIRE(f16.at(j, k) == f16.at(k, j));
    }
    CHECK(testing::value_eq(f16.at(0, j), testing::ch(1, 0)));
    CHECK(testing::value_eq(f16.at(j, 0), testing::ch(1, 0)));
  }
  CHECK_THROWS_AS(dft_matrix(8), UnsupportedSize);
  CHECK_THROWS_AS(dft_matrix(32), UnsupportedSize);
  CHECK_THROWS_AS(dft_matrix(0), UnsupportedSize);
}

TEST_CASE("F16 is unitary up to scale in real-64") {
  const auto f = dft_matrix64(16);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      std::complex<double> s = 0.0;
      for (int k = 0; k < 16; ++k) s += f[static_cast<std::size_t>(i * 16 + k)] * std::conj(f[static_cast<std::size_t>(j * 16 + k)]);
      const std::complex<double> expect = i == j ? 16.0 : 0.0;
      REQUIRE(std::abs(s - expect) < 1e-12);
    }
  }
}

TEST_CASE("twiddle tiles") {
  const TwiddleTile t = twiddle_tile(2, 4, 8);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(testing::value_eq(t.at(0, k), testing::ch(1, 0)));
    CHECK(t.at(1, k) == rounded_root(k, 8));
  }
  const TwiddleTile col = twiddle_tile(16, 1, 16);
  CHECK(col.entries.size() == 16);
  for (const auto& e : col.entries) CHECK(testing::value_eq(e, testing::ch(1, 0)));

  const TwiddleTile big = twiddle_tile(16, 16, 256);
  for (std::size_t m = 0; m < 16; ++m) {
    for (std::size_t k = 0; k < 16; ++k) {
      REQUIRE(big.at(m, k) == twiddle_at(m, k, 256));
      const double mag = std::abs(testing::to_cd(big.at(m, k)));
      REQUIRE(std::abs(mag - 1.0) < std::ldexp(1.0, -10));
    }
  }
  CHECK_THROWS_AS(twiddle_tile(16, 16, 512), ShapeMismatch);
}

}  // TEST_SUITE
