#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "tcfft/cli.hpp"
#include "tcfft/io.hpp"
#include "tcfft/workload.hpp"
#include "test_support.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "tcfft");
  std::ostringstream out;
  std::ostringstream err;
  const int code = tcfft::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

// CSV rows without the timing fields.
std::string without_timing(const std::string& csv) {
  std::string out;
  for (const auto& l : lines(csv)) {
    if (l.find("total_time_s") == std::string::npos && l.find("emulated_tflops") == std::string::npos &&
        l.find("repeats") == std::string::npos) {
      out += l + "\n";
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("verify writes CSV and passes the default envelope") {
  const Result r = run({"verify", "--sizes", "16", "--seed", "1"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "kind,n,ny,batch,metric,value");
  CHECK(ls[1].rfind("1d,16,1,1,mean_relative_error,", 0) == 0);
  const double err = std::stod(ls[1].substr(ls[1].rfind(',') + 1));
  CHECK(err < 0.035);
  CHECK(r.err.empty());
}

TEST_CASE("verify 2D") {
  const Result r = run({"verify", "--dims", "2", "--sizes", "256", "--ny", "256"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).at(1).rfind("2d,256,256,1,mean_relative_error,", 0) == 0);
}

TEST_CASE("verify fails when the envelope is exceeded") {
  const Result r = run({"verify", "--sizes", "256", "--envelope", "0.0001"});
  CHECK(r.code == 1);
  CHECK(lines(r.err).size() == 1);
  CHECK(r.err.find("exceeds") != std::string::npos);
}

TEST_CASE("usage errors exit 2 with one line") {
  for (const auto& args : std::vector<std::vector<std::string>>{{"verify", "--sizes", "96"},
                                                                {"verify", "--sizes", "16", "--continuous-size", "3"},
                                                                {"verify", "--sizes", "16", "--mode", "single"},
                                                                {"verify", "--sizes", "16", "--dims", "3"},
                                                                {"verify"},
                                                                {},
                                                                {"frobnicate"},
                                                                {"fragmap", "--map", "nope"},
                                                                {"plan", "--sizes", "16", "--batch", "0"}}) {
    const Result r = run(args);
    CHECK(r.code == 2);
    CHECK(lines(r.err).size() == 1);
  }
}

TEST_CASE("help exits 0") {
  const Result r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verify") != std::string::npos);
}

TEST_CASE("same seed gives identical CSV") {
  const Result a = run({"verify", "--sizes", "1024,4096", "--batch", "2", "--seed", "42"});
  const Result b = run({"verify", "--sizes", "1024,4096", "--batch", "2", "--seed", "42"});
  CHECK(a.out == b.out);
  const Result c = run({"verify", "--sizes", "1024,4096", "--batch", "2", "--seed", "43"});
  CHECK(a.out != c.out);
}

TEST_CASE("bench") {
  const Result a = run({"bench", "--sizes", "65536", "--batch", "8", "--min-time", "0"});
  CHECK(a.code == 0);
  const auto ls = lines(a.out);
  CHECK(ls.at(0) == "kind,n,ny,batch,metric,value");
  double tflops = 0.0;
  for (const auto& l : ls) {
    if (l.find("emulated_tflops") != std::string::npos) tflops = std::stod(l.substr(l.rfind(',') + 1));
  }
  CHECK(tflops > 0.0);
  const Result b = run({"bench", "--sizes", "65536", "--batch", "8", "--min-time", "0"});
  CHECK(without_timing(a.out) == without_timing(b.out));
  CHECK(without_timing(a.out).find("flops_per_exec,100663296") != std::string::npos);
}

TEST_CASE("plan and fragmap dumps") {
  const Result p = run({"plan", "--sizes", "131072,16"});
  CHECK(p.code == 0);
  const auto ls = lines(p.out);
  REQUIRE(ls.size() == 2);
  CHECK(nlohmann::json::parse(ls[0])["schedule_x"] == nlohmann::json::array({8192, 16}));
  CHECK(nlohmann::json::parse(ls[1])["schedule_x"] == nlohmann::json::array({16}));

  for (const auto& args : std::vector<std::vector<std::string>>{{"fragmap"}, {"fragmap", "dump"}}) {
    const Result f = run(args);
    CHECK(f.code == 0);
    const auto j = nlohmann::json::parse(f.out);
    REQUIRE(j["lanes"].size() == 32);
    for (const auto& lane : j["lanes"]) CHECK(lane.size() == j["lanes"][0].size());
  }
  const Result rep = run({"fragmap", "--map", "replicated"});
  CHECK(nlohmann::json::parse(rep.out)["lanes"][0].size() == 16);
  CHECK(run({"fragmap", "--map", "random:5"}).code == 0);
  CHECK(run({"fragmap", "--map", "row-cyclic:3"}).code == 0);
}

TEST_CASE("--out writes the file") {
  const auto path = (std::filesystem::temp_directory_path() / "tcfft_cli_plan.json").string();
  const Result r = run({"plan", "--sizes", "256", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(nlohmann::json::parse(line)["nx"] == 256);
  std::remove(path.c_str());
  CHECK(run({"plan", "--sizes", "256", "--out", "/nonexistent/dir/p.json"}).code == 1);
}

TEST_CASE("transform a TCF1 file") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto in = (dir / "tcfft_cli_in.tcf").string();
  const auto out = (dir / "tcfft_cli_out.tcf").string();
  const auto values = testing::random_ch(64 * 32 * 2, 3);
  tcfft::write_tcf_file(in, {2, 64, 32, 2}, values);
  const Result r = run({"transform", "--in", in, "--out", out});
  CHECK(r.code == 0);
  const auto got = tcfft::read_tcf_file(out);
  auto expect = values;
  tcfft::transform_half(tcfft::plan_2d(64, 32, 2), expect);
  CHECK(got.values == expect);
  CHECK(run({"transform", "--in", "/nonexistent.tcf", "--out", out}).code == 1);
  std::remove(in.c_str());
  std::remove(out.c_str());
}

}  // TEST_SUITE
