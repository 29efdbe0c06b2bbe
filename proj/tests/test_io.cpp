#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "tcfft/error.hpp"
#include "tcfft/io.hpp"
#include "test_support.hpp"

using namespace tcfft;

TEST_SUITE("io") {

TEST_CASE("TCF1 layout is little-endian") {
  std::ostringstream os;
  write_tcf(os, {1, 2, 1, 1}, std::vector<ComplexHalf>{testing::ch(1, -2), testing::ch(0.5, 0)});
  const std::string s = os.str();
  REQUIRE(s.size() == 4 + 16 + 8);
  CHECK(s.substr(0, 4) == "TCF1");
  CHECK(static_cast<unsigned char>(s[4]) == 1);
  CHECK(static_cast<unsigned char>(s[8]) == 2);
  CHECK(static_cast<unsigned char>(s[12]) == 1);
  CHECK(static_cast<unsigned char>(s[16]) == 1);
  // 1.0 = 0x3C00, -2.0 = 0xC000
  CHECK(static_cast<unsigned char>(s[20]) == 0x00);
  CHECK(static_cast<unsigned char>(s[21]) == 0x3C);
  CHECK(static_cast<unsigned char>(s[22]) == 0x00);
  CHECK(static_cast<unsigned char>(s[23]) == 0xC0);
}

TEST_CASE("round trip through a stream and a file") {
  const auto values = testing::random_ch(16 * 8 * 3, 1);
  const TcfHeader h{2, 16, 8, 3};
  std::stringstream ss;
  write_tcf(ss, h, values);
  const TcfData d = read_tcf(ss);
  CHECK(d.header == h);
  CHECK(d.values == values);

  const auto path = (std::filesystem::temp_directory_path() / "tcfft_io_test.tcf").string();
  write_tcf_file(path, h, values);
  const TcfData f = read_tcf_file(path);
  CHECK(f.header == h);
  CHECK(f.values == values);
  std::remove(path.c_str());
}

TEST_CASE("malformed input") {
  std::istringstream bad_magic("TCF2xxxxxxxxxxxxxxxx");
  CHECK_THROWS_AS(read_tcf(bad_magic), IoError);
  std::istringstream short_header(std::string("TCF1\x01\x00", 6));
  CHECK_THROWS_AS(read_tcf(short_header), IoError);

  std::ostringstream os;
  write_tcf(os, {1, 4, 1, 1}, testing::random_ch(4, 2));
  std::istringstream truncated(os.str().substr(0, os.str().size() - 3));
  CHECK_THROWS_AS(read_tcf(truncated), IoError);

  std::ostringstream sink;
  CHECK_THROWS_AS(write_tcf(sink, {3, 4, 1, 1}, testing::random_ch(4, 2)), IoError);
  CHECK_THROWS_AS(write_tcf(sink, {1, 4, 2, 1}, testing::random_ch(8, 2)), IoError);
  CHECK_THROWS_AS(write_tcf(sink, {1, 4, 1, 1}, testing::random_ch(5, 2)), IoError);
  CHECK_THROWS_AS(read_tcf_file("/nonexistent/dir/x.tcf"), IoError);
}

}  // TEST_SUITE
