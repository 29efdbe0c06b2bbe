#include "tcfft/executor.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <bit>
#include <functional>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <utility>

#include "tcfft/scratch.hpp"

namespace tcfft {

std::vector<int> flatten_schedule(std::span<const int> schedule) {
  std::vector<int> digits;
  for (const int r : schedule) {
    const auto sub = sub_radices(r);
    digits.insert(digits.end(), sub.begin(), sub.end());
  }
  return digits;
}

std::size_t digit_reversed_position(std::size_t i, std::span<const int> radices) {
  std::vector<std::size_t> digits(radices.size());
  for (std::size_t s = radices.size(); s-- > 0;) {
    const auto r = static_cast<std::size_t>(radices[s]);
    digits[s] = i % r;
    i /= r;
  }
  std::size_t pos = 0;
  for (std::size_t s = radices.size(); s-- > 0;) pos = pos * static_cast<std::size_t>(radices[s]) + digits[s];
  return pos;
}

namespace {

// For each bit of the input index, the bit it occupies in the position.
std::vector<int> reversal_bit_targets(std::span<const int> radices) {
  std::vector<int> width(radices.size());
  for (std::size_t s = 0; s < radices.size(); ++s) {
    if (radices[s] < 2 || !std::has_single_bit(static_cast<unsigned>(radices[s]))) {
      throw ArgumentError("digit reversal needs power-of-two radices");
    }
    width[s] = std::countr_zero(static_cast<unsigned>(radices[s]));
  }
  const int total = std::accumulate(width.begin(), width.end(), 0);
  std::vector<int> target(static_cast<std::size_t>(total));
  // input index: digit m lowest ... digit 1 highest; position: digit 1 lowest.
  int in_bit = 0;
  for (std::size_t s = radices.size(); s-- > 0;) {
    int out_bit = 0;
    for (std::size_t t = 0; t < s; ++t) out_bit += width[t];
    for (int b = 0; b < width[s]; ++b) target[static_cast<std::size_t>(in_bit + b)] = out_bit + b;
    in_bit += width[s];
  }
  return target;
}

template <class T>
void swap_address_bits(StridedSpan<T> seq, int u, int v) {
  const std::size_t bu = std::size_t{1} << u;
  const std::size_t bv = std::size_t{1} << v;
  for (std::size_t i = 0; i < seq.len; ++i) {
    if ((i & bu) && !(i & bv)) std::swap(seq[i], seq[i ^ bu ^ bv]);
  }
}

}  // namespace

template <class T>
void digit_reversal_permute(StridedSpan<T> seq, std::span<const int> radices) {
  const auto target = reversal_bit_targets(radices);
  if (seq.len != (std::size_t{1} << target.size())) {
    throw ShapeMismatch("radices do not multiply to the sequence length");
  }
  // where[b]: address bit currently carrying input bit b; holder: inverse.
  std::vector<int> where(target.size());
  std::vector<int> holder(target.size());
  std::iota(where.begin(), where.end(), 0);
  std::iota(holder.begin(), holder.end(), 0);
  for (std::size_t b = 0; b < target.size(); ++b) {
    const int from = where[b];
    const int to = target[b];
    if (from == to) continue;
    swap_address_bits(seq, from, to);
    const int other = holder[static_cast<std::size_t>(to)];
    where[static_cast<std::size_t>(other)] = from;
    holder[static_cast<std::size_t>(from)] = other;
    where[b] = to;
    holder[static_cast<std::size_t>(to)] = static_cast<int>(b);
  }
}

template void digit_reversal_permute(StridedSpan<ComplexHalf>, std::span<const int>);
template void digit_reversal_permute(StridedSpan<std::complex<double>>, std::span<const int>);

LayoutState::LayoutState(std::vector<int> digits, int continuous_size)
    : digits_(std::move(digits)), continuous_size_(continuous_size) {}

std::size_t LayoutState::sub_length() const {
  std::size_t n = 1;
  for (const int r : merged()) n *= static_cast<std::size_t>(r);
  return n;
}

void LayoutState::advance(int radix) {
  if (done() || digits_[merged_] != radix) {
    throw ContractError("layout expected radix " + (done() ? std::string("none") : std::to_string(digits_[merged_])) +
                        ", got " + std::to_string(radix));
  }
  ++merged_;
}

namespace {

// Runs `phases` one after another on `workers` threads; each phase is a set
// of independent work items. Worker-local state is created on its thread.
template <class State>
void run_phases(int workers, const std::function<State()>& make_state,
                const std::vector<std::pair<std::size_t, std::function<void(State&, std::size_t)>>>& phases,
                const std::function<void(State&)>& finish) {
  if (workers <= 1) {
    State state = make_state();
    for (const auto& [count, fn] : phases) {
      for (std::size_t i = 0; i < count; ++i) fn(state, i);
    }
    finish(state);
    return;
  }
  std::vector<std::atomic<std::size_t>> next(phases.size());
  for (auto& n : next) n.store(0);
  std::barrier sync(workers);
  std::mutex error_mutex;
  std::exception_ptr error;
  auto body = [&] {
    try {
      State state = make_state();
      for (std::size_t p = 0; p < phases.size(); ++p) {
        const auto& [count, fn] = phases[p];
        for (std::size_t i = next[p].fetch_add(1); i < count; i = next[p].fetch_add(1)) fn(state, i);
        sync.arrive_and_wait();
      }
      finish(state);
    } catch (...) {
      std::scoped_lock lock(error_mutex);
      if (!error) error = std::current_exception();
      sync.arrive_and_drop();
    }
  };
  std::vector<std::jthread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) threads.emplace_back(body);
  threads.clear();
  if (error) std::rethrow_exception(error);
}

template <class P>
ExecStats run_schedule(std::span<const int> schedule, const BatchedTensor<typename P::Complex>& data,
                       int continuous_size, const ExecOptions& options) {
  using Complex = typename P::Complex;
  const auto digits = flatten_schedule(schedule);
  std::size_t product = 1;
  for (const int r : digits) product *= static_cast<std::size_t>(r);
  if (product != data.len()) {
    throw ShapeMismatch("schedule covers " + std::to_string(product) + " points, data has " +
                        std::to_string(data.len()));
  }

  std::vector<MergeKernel> kernels;
  for (const int r : schedule) kernels.push_back(make_merge_kernel(r));

  LayoutState layout(digits, continuous_size);

  struct Worker {
    MergeEngine<P> engine;
    std::size_t base_scratch;
  };
  MergeOptions mopts{options.map ? options.map : default_fragment_map(), continuous_size, options.twiddle};

  using Phase = std::pair<std::size_t, std::function<void(Worker&, std::size_t)>>;
  std::vector<Phase> phases;
  phases.emplace_back(data.batch(), [&](Worker&, std::size_t b) {
    digit_reversal_permute(data.sequence(b), std::span<const int>(digits));
  });
  std::size_t n2 = 1;
  for (const MergeKernel& kernel : kernels) {
    const std::size_t seg_len = n2 * static_cast<std::size_t>(kernel.radix);
    const std::size_t per_seq = data.len() / seg_len;
    phases.emplace_back(data.batch() * per_seq, [&, n2, seg_len, per_seq](Worker& w, std::size_t item) {
      const StridedSpan<Complex> seq = data.sequence(item / per_seq);
      w.engine.run_merge_kernel(kernel, seq.sub((item % per_seq) * seg_len, seg_len), n2);
    });
    for (const SubMerge& s : kernel.sub_merges) layout.advance(s.radix);
    n2 = seg_len;
  }
  if (!layout.done()) throw ContractError("schedule left digits unmerged");

  ExecStats stats;
  std::mutex stats_mutex;
  run_phases<Worker>(
      options.workers,
      [&] {
        const std::size_t base = scratch::current();
        scratch::reset_peak();
        return Worker{MergeEngine<P>(mopts), base};
      },
      phases,
      [&](Worker& w) {
        std::scoped_lock lock(stats_mutex);
        stats.merge += w.engine.stats();
        stats.peak_scratch = std::max(stats.peak_scratch, scratch::peak() - w.base_scratch);
      });
  return stats;
}

template <class T>
ExecStats dispatch(std::span<const int> schedule, const BatchedTensor<T>& data, int cs, const ExecOptions& options) {
  if constexpr (std::is_same_v<T, ComplexHalf>) {
    if (options.accumulate == AccumulatePrecision::fp16) {
      return run_schedule<HalfPrecisionFp16Accum>(schedule, data, cs, options);
    }
    return run_schedule<HalfPrecision>(schedule, data, cs, options);
  } else {
    return run_schedule<DoublePrecision>(schedule, data, cs, options);
  }
}

ExecStats& accumulate_stats(ExecStats& into, const ExecStats& s) {
  into.merge += s.merge;
  into.peak_scratch = std::max(into.peak_scratch, s.peak_scratch);
  return into;
}

template <class T>
ExecStats execute_impl(const Plan& plan, const BatchedTensor<T>& data, const ExecOptions& options,
                       PrecisionMode expected) {
  if (!plan.initialized()) throw ContractError("plan is not initialized");
  if (plan.precision != expected) {
    throw ContractError("plan precision '" + to_string(plan.precision) + "' does not match the data type");
  }
  if (data.batch() != plan.batch || data.len() != sequence_length(plan)) {
    throw ShapeMismatch("data shape (batch " + std::to_string(data.batch()) + ", len " + std::to_string(data.len()) +
                        ") does not match the plan");
  }
  const int cs = plan.continuous_size;
  if (plan.dims == 1) return dispatch(plan.schedule_x, data, cs, options);

  ExecStats stats;
  const std::size_t nx = plan.nx;
  const std::size_t ny = plan.ny;
  const std::size_t s = data.stride();
  for (std::size_t b = 0; b < data.batch(); ++b) {
    const std::span<T> sub = data.buffer().subspan(b * data.batch_stride());
    // rows: nx contiguous sequences of length ny
    const BatchedTensor<T> rows(sub, nx, ny, s, ny * s);
    accumulate_stats(stats, dispatch(plan.schedule_y, rows, cs, options));
    // columns: ny sequences of length nx with stride ny
    const BatchedTensor<T> cols(sub, ny, nx, ny * s, s);
    accumulate_stats(stats, dispatch(plan.schedule_x, cols, cs, options));
  }
  return stats;
}

}  // namespace

ExecStats strided_pass(std::span<const int> schedule, const BatchedTensor<ComplexHalf>& data, int continuous_size,
                       const ExecOptions& options) {
  return dispatch(schedule, data, continuous_size, options);
}

ExecStats strided_pass(std::span<const int> schedule, const BatchedTensor<std::complex<double>>& data,
                       int continuous_size, const ExecOptions& options) {
  return dispatch(schedule, data, continuous_size, options);
}

ExecStats execute(const Plan& plan, const BatchedTensor<ComplexHalf>& data, const ExecOptions& options) {
  return execute_impl(plan, data, options, PrecisionMode::half);
}

ExecStats execute(const Plan& plan, const BatchedTensor<std::complex<double>>& data, const ExecOptions& options) {
  return execute_impl(plan, data, options, PrecisionMode::double_reference);
}

}  // namespace tcfft
