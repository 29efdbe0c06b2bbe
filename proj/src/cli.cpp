#include "tcfft/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "tcfft/error.hpp"
#include "tcfft/io.hpp"
#include "tcfft/mma.hpp"
#include "tcfft/workload.hpp"

namespace tcfft::cli {

namespace {

// Bad user input that should exit with the usage code.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::shared_ptr<const FragmentMap> parse_map(const std::string& text) {
  if (text == "default") return default_fragment_map();
  if (text == "replicated") return std::make_shared<const FragmentMap>(FragmentMap::replicated_pairs());
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    const std::string arg = text.substr(colon + 1);
    try {
      if (kind == "random") return std::make_shared<const FragmentMap>(FragmentMap::random(std::stoull(arg)));
      if (kind == "row-cyclic") return std::make_shared<const FragmentMap>(FragmentMap::row_cyclic(std::stoi(arg)));
    } catch (const std::logic_error&) {
      throw UsageError("bad fragment map argument '" + arg + "'");
    }
  }
  throw UsageError("unknown fragment map '" + text + "' (default, replicated, random:<seed>, row-cyclic:<k>)");
}

ExecOptions exec_options(const RunConfig& cfg) {
  ExecOptions o;
  o.map = parse_map(cfg.map);
  o.workers = cfg.workers;
  if (cfg.accumulate == "fp16") o.accumulate = AccumulatePrecision::fp16;
  return o;
}

Plan make_plan(const RunConfig& cfg, std::size_t nx) {
  PlanOptions po;
  po.continuous_size = cfg.continuous_size;
  po.precision = parse_precision(cfg.mode);
  try {
    if (cfg.dims == 2) return plan_2d(nx, cfg.ny == 0 ? nx : cfg.ny, cfg.batch, po);
    return plan_1d(nx, cfg.batch, po);
  } catch (const UnsupportedSize& e) {
    throw UsageError(e.what());
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
}

// Writes to --out when given, otherwise to the default stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw IoError("cannot open '" + path + "' for writing");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

std::vector<Plan> plans_for(const RunConfig& cfg) {
  if (cfg.sizes.empty()) throw UsageError("--sizes is required");
  std::vector<Plan> plans;
  for (const std::size_t n : cfg.sizes) plans.push_back(make_plan(cfg, n));
  return plans;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto plans = plans_for(cfg);
  const auto opts = exec_options(cfg);
  Sink sink(cfg.out, out);
  sink.stream() << kCsvHeader << '\n';
  const double envelope = cfg.envelope_pct / 100.0;
  bool ok = true;
  for (const Plan& plan : plans) {
    const ErrorReport report = verify_plan(plan, cfg.seed, opts);
    write_csv_rows(sink.stream(), report);
    for (std::size_t b = 0; b < report.per_sequence.size(); ++b) {
      if (!(report.per_sequence[b] <= envelope)) {
        err << "error: size " << plan.nx << (plan.dims == 2 ? "x" + std::to_string(plan.ny) : std::string())
            << " sequence " << b << " relative error " << report.per_sequence[b] * 100.0 << "% exceeds "
            << cfg.envelope_pct << "%\n";
        ok = false;
        break;
      }
    }
  }
  return ok ? kExitOk : kExitFailure;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (!(cfg.min_time >= 0.0)) throw UsageError("--min-time must be >= 0");
  const auto plans = plans_for(cfg);
  const auto opts = exec_options(cfg);
  Sink sink(cfg.out, out);
  sink.stream() << kCsvHeader << '\n';
  for (const Plan& plan : plans) write_csv_rows(sink.stream(), bench_plan(plan, cfg.seed, cfg.min_time, opts));
  return kExitOk;
}

int cmd_plan(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto plans = plans_for(cfg);
  Sink sink(cfg.out, out);
  for (const Plan& plan : plans) sink.stream() << to_json(plan) << '\n';
  return kExitOk;
}

int cmd_fragmap(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto map = parse_map(cfg.map);
  Sink sink(cfg.out, out);
  sink.stream() << map->to_json() << '\n';
  return kExitOk;
}

int cmd_transform(const RunConfig& cfg, std::ostream&, std::ostream&) {
  if (cfg.in.empty() || cfg.out.empty()) throw UsageError("transform needs --in and --out");
  TcfData data = read_tcf_file(cfg.in);
  const TcfHeader& h = data.header;
  PlanOptions po;
  po.continuous_size = cfg.continuous_size;
  Plan plan;
  try {
    plan = h.dims == 2 ? plan_2d(h.nx, h.ny, h.batch, po) : plan_1d(h.nx, h.batch, po);
  } catch (const UnsupportedSize& e) {
    throw UsageError(e.what());
  }
  transform_half(plan, data.values, exec_options(cfg));
  write_tcf_file(cfg.out, h, data.values);
  return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--sizes", cfg.sizes, "Transform lengths (nx for 2D)")->delimiter(',');
  sub->add_option("--ny", cfg.ny, "Second (contiguous) dimension for 2D; defaults to nx");
  sub->add_option("--batch", cfg.batch, "Sequences per size");
  sub->add_option("--dims", cfg.dims, "1 or 2")->check(CLI::IsMember({1, 2}));
  sub->add_option("--seed", cfg.seed, "Input generator seed");
  sub->add_option("--continuous-size", cfg.continuous_size, "Elements per coalesced group")
      ->check(CLI::IsMember({4, 8, 16, 32, 64}));
  sub->add_option("--mode", cfg.mode, "half or double")->check(CLI::IsMember({"half", "double"}));
  sub->add_option("--out", cfg.out, "Output file (default stdout)");
  sub->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--map", cfg.map, "Fragment map: default, replicated, random:<seed>, row-cyclic:<k>");
  sub->add_option("--accumulate", cfg.accumulate, "MMA accumulator precision")
      ->check(CLI::IsMember({"fp32", "fp16"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Tensor-core style half-precision FFT on an emulated MMA primitive", "tcfft"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Relative error of the half pipeline against a real-64 reference");
  add_common(verify, cfg);
  verify->add_option("--envelope", cfg.envelope_pct, "Maximum per-sequence relative error in percent");

  auto* bench = app.add_subcommand("bench", "Emulator throughput in radix-2 equivalent TFLOPS");
  add_common(bench, cfg);
  bench->add_option("--min-time", cfg.min_time, "Seconds of execute time per size");

  auto* plan = app.add_subcommand("plan", "Print the plan chosen for each size as JSON");
  add_common(plan, cfg);

  auto* fragmap = app.add_subcommand("fragmap", "Print a fragment element map as JSON");
  std::string fragmap_action = "dump";
  fragmap->add_option("action", fragmap_action, "Only 'dump'")->check(CLI::IsMember({"dump"}));
  fragmap->add_option("--map", cfg.map, "Fragment map: default, replicated, random:<seed>, row-cyclic:<k>");
  fragmap->add_option("--out", cfg.out, "Output file (default stdout)");

  auto* transform = app.add_subcommand("transform", "Transform a TCF1 file");
  transform->add_option("--in", cfg.in, "Input TCF1 file")->required();
  transform->add_option("--out", cfg.out, "Output TCF1 file")->required();
  transform->add_option("--continuous-size", cfg.continuous_size, "Elements per coalesced group")
      ->check(CLI::IsMember({4, 8, 16, 32, 64}));
  transform->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  transform->add_option("--map", cfg.map, "Fragment map");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*verify) return cmd_verify((cfg.command = "verify", cfg), out, err);
    if (*bench) return cmd_bench((cfg.command = "bench", cfg), out, err);
    if (*plan) return cmd_plan((cfg.command = "plan", cfg), out, err);
    if (*fragmap) return cmd_fragmap((cfg.command = "fragmap", cfg), out, err);
    return cmd_transform((cfg.command = "transform", cfg), out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace tcfft::cli
