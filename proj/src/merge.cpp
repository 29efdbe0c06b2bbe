#include "tcfft/merge.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "tcfft/error.hpp"

namespace tcfft {

bool is_catalog_radix(int radix) { return radix >= 2 && radix <= 8192 && std::has_single_bit(static_cast<unsigned>(radix)); }

std::vector<int> sub_radices(int radix) {
  if (!is_catalog_radix(radix)) {
    throw UnsupportedSize("radix " + std::to_string(radix) + " is not in the kernel catalog");
  }
  std::vector<int> out;
  int rest = radix;
  while (rest >= 16) {
    out.push_back(16);
    rest /= 16;
  }
  switch (rest) {
    case 2:
      out.push_back(2);
      break;
    case 4:
      out.push_back(4);
      break;
    case 8:
      out.push_back(4);
      out.push_back(2);
      break;
    default:
      break;
  }
  return out;
}

MergeKernel make_merge_kernel(int radix) {
  MergeKernel k;
  k.radix = radix;
  for (const int r : sub_radices(radix)) {
    k.sub_merges.push_back({r, r == 16 ? SubMergePath::mma : SubMergePath::scalar});
  }
  return k;
}

std::vector<ExchangeTier> exchange_tiers(const MergeKernel& kernel, std::size_t n2) {
  std::vector<ExchangeTier> tiers;
  std::size_t block = n2;
  for (std::size_t i = 0; i < kernel.sub_merges.size(); ++i) {
    block *= static_cast<std::size_t>(kernel.sub_merges[i].radix);
    if (i + 1 == kernel.sub_merges.size()) {
      tiers.push_back(ExchangeTier::global);
    } else {
      const std::size_t next = block * static_cast<std::size_t>(kernel.sub_merges[i + 1].radix);
      tiers.push_back(next <= static_cast<std::size_t>(kTileElems) ? ExchangeTier::warp : ExchangeTier::block);
    }
  }
  return tiers;
}

std::vector<ColumnRun> gather_continuous(std::size_t columns, int continuous_size) {
  if (continuous_size < 1 || !std::has_single_bit(static_cast<unsigned>(continuous_size))) {
    throw ArgumentError("continuous size must be a power of two");
  }
  const std::size_t run = std::min<std::size_t>(static_cast<std::size_t>(continuous_size), columns);
  if (run == 0) return {};
  if (columns % run != 0) throw ShapeMismatch("continuous size does not divide the column count");
  std::vector<ColumnRun> runs;
  runs.reserve(columns / run);
  for (std::size_t first = 0; first < columns; first += run) runs.push_back({first, run});
  return runs;
}

std::vector<std::size_t> run_positions(const ColumnRun& run, std::size_t n2, int radix) {
  const std::size_t n = n2 * static_cast<std::size_t>(radix);
  std::vector<std::size_t> pos;
  for (std::size_t c = run.first; c < run.first + run.count; ++c) {
    const std::size_t base = (c / n2) * n + c % n2;
    for (int m = 0; m < radix; ++m) pos.push_back(base + static_cast<std::size_t>(m) * n2);
  }
  std::sort(pos.begin(), pos.end());
  return pos;
}

std::vector<TileColumns> assemble_tiles(std::span<const ColumnRun> runs) {
  std::vector<TileColumns> tiles;
  if (runs.empty()) return tiles;
  const std::size_t run = runs.front().count;
  TileColumns blank;
  blank.fill(kPadColumn);

  if (run >= kTileDim) {
    for (const ColumnRun& r : runs) {
      for (std::size_t off = 0; off < r.count; off += kTileDim) {
        TileColumns t = blank;
        for (std::size_t j = 0; j < kTileDim && off + j < r.count; ++j) {
          t[j] = static_cast<std::int64_t>(r.first + off + j);
        }
        tiles.push_back(t);
      }
    }
    return tiles;
  }

  const std::size_t per_tile = kTileDim / run;
  const std::size_t count = (runs.size() + per_tile - 1) / per_tile;
  tiles.assign(count, blank);
  for (std::size_t t = 0; t < count; ++t) {
    for (std::size_t j = 0; j < per_tile; ++j) {
      const std::size_t q = t + j * count;
      if (q >= runs.size()) break;
      for (std::size_t e = 0; e < runs[q].count; ++e) {
        tiles[t][j * run + e] = static_cast<std::int64_t>(runs[q].first + e);
      }
    }
  }
  return tiles;
}

MergeStats& MergeStats::operator+=(const MergeStats& o) {
  mma_calls += o.mma_calls;
  mma_columns += o.mma_columns;
  scalar_butterflies += o.scalar_butterflies;
  radix16_steps += o.radix16_steps;
  scalar_steps += o.scalar_steps;
  mma_work += o.mma_work;
  scalar_work += o.scalar_work;
  return *this;
}

// ---------------------------------------------------------------------------

namespace {

void check_block(std::size_t len, std::size_t n2, int radix) {
  if (n2 == 0 || len == 0 || len % (n2 * static_cast<std::size_t>(radix)) != 0) {
    throw ShapeMismatch("segment length " + std::to_string(len) + " is not a multiple of " +
                        std::to_string(radix) + " * " + std::to_string(n2));
  }
}

}  // namespace

template <class P>
MergeEngine<P>::MergeEngine(MergeOptions options)
    : options_(std::move(options)),
      warp_(options_.map ? options_.map : default_fragment_map()),
      f_re_(warp_.make_fragment<Operand>(FragmentKind::matrix_a)),
      f_im_(warp_.make_fragment<Operand>(FragmentKind::matrix_a)),
      f_im_neg_(warp_.make_fragment<Operand>(FragmentKind::matrix_a)),
      x_re_(warp_.make_fragment<Operand>(FragmentKind::matrix_b)),
      x_im_(warp_.make_fragment<Operand>(FragmentKind::matrix_b)),
      zero_(warp_.make_fragment<Accum>(FragmentKind::accumulator)),
      d_re_(warp_.make_fragment<Accum>(FragmentKind::accumulator)),
      d_im_(warp_.make_fragment<Accum>(FragmentKind::accumulator)),
      out_re_(kTileElems),
      out_im_(kTileElems) {
  if (!options_.map) options_.map = warp_.map();
  gather_continuous(kTileDim, options_.continuous_size);  // validates

  TrackedBuffer<Operand> re(kTileElems);
  TrackedBuffer<Operand> im(kTileElems);
  TrackedBuffer<Operand> im_neg(kTileElems);
  for (int j = 0; j < kTileDim; ++j) {
    for (int k = 0; k < kTileDim; ++k) {
      const Complex w = P::twiddle(static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(k), kTileDim);
      const auto idx = static_cast<std::size_t>(j * kTileDim + k);
      re[idx] = P::re(w);
      im[idx] = P::im(w);
      im_neg[idx] = -P::im(w);
    }
  }
  load_matrix_sync(f_re_, std::span<const Operand>(re.data(), re.size()), kTileDim);
  load_matrix_sync(f_im_, std::span<const Operand>(im.data(), im.size()), kTileDim);
  load_matrix_sync(f_im_neg_, std::span<const Operand>(im_neg.data(), im_neg.size()), kTileDim);
  fill_fragment(zero_, 0.0f);
}

// Each lane fetches the elements calc_eid assigns to it, applies the
// twiddle factor and splits the product into the real/imag fragments.
template <class P>
void MergeEngine<P>::load_tile_fused(StridedSpan<Complex> seg, const TileColumns& cols, std::size_t n2) {
  const std::size_t n = n2 * kTileDim;
  const FragmentMap& map = *warp_.map();
  const int ne = map.num_elements();
  for (int lane = 0; lane < kWarpSize; ++lane) {
    for (int i = 0; i < ne; ++i) {
      const TilePos eid = calc_eid(lane, i, map);
      const std::int64_t c = cols[static_cast<std::size_t>(eid.col)];
      Complex v{};
      if (c != kPadColumn) {
        const auto col = static_cast<std::size_t>(c);
        const std::size_t k = col % n2;
        const std::size_t m = static_cast<std::size_t>(eid.row);
        v = P::mul(seg[(col / n2) * n + m * n2 + k], P::twiddle(m, k, n));
      }
      x_re_.x(lane, i) = P::re(v);
      x_im_.x(lane, i) = P::im(v);
    }
  }
}

// Reference path: gather into a scratch tile, materialize the twiddle tile,
// multiply elementwise in memory, split, then load through the WMMA API.
template <class P>
void MergeEngine<P>::load_tile_unfused(StridedSpan<Complex> seg, const TileColumns& cols, std::size_t n2) {
  const std::size_t n = n2 * kTileDim;
  TrackedBuffer<Complex> in(kTileElems);
  TrackedBuffer<Complex> tw(kTileElems);
  for (std::size_t m = 0; m < kTileDim; ++m) {
    for (std::size_t j = 0; j < kTileDim; ++j) {
      const std::int64_t c = cols[j];
      if (c == kPadColumn) {
        tw[m * kTileDim + j] = P::make(P::narrow(1.0), P::narrow(0.0));
        continue;
      }
      const auto col = static_cast<std::size_t>(c);
      in[m * kTileDim + j] = seg[(col / n2) * n + m * n2 + col % n2];
      tw[m * kTileDim + j] = P::twiddle(m, col % n2, n);
    }
  }
  TrackedBuffer<Operand> re(kTileElems);
  TrackedBuffer<Operand> im(kTileElems);
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(kTileElems); ++idx) {
    const Complex v = cols[idx % kTileDim] == kPadColumn ? Complex{} : P::mul(in[idx], tw[idx]);
    re[idx] = P::re(v);
    im[idx] = P::im(v);
  }
  load_matrix_sync(x_re_, std::span<const Operand>(re.data(), re.size()), kTileDim);
  load_matrix_sync(x_im_, std::span<const Operand>(im.data(), im.size()), kTileDim);
}

template <class P>
void MergeEngine<P>::radix16_submerge(StridedSpan<Complex> seg, std::size_t n2) {
  check_block(seg.len, n2, kTileDim);
  const std::size_t n = n2 * kTileDim;
  const std::size_t columns = seg.len / kTileDim;
  const auto runs = gather_continuous(columns, options_.continuous_size);
  const auto tiles = assemble_tiles(runs);
  const auto calls_before = warp_.mma_calls();

  for (const TileColumns& cols : tiles) {
    if (options_.twiddle == TwiddleMode::fused) {
      load_tile_fused(seg, cols, n2);
    } else {
      load_tile_unfused(seg, cols, n2);
    }
    // re = Fr*Xr - Fi*Xi, im = Fr*Xi + Fi*Xr
    warp_.mma_sync(d_re_, f_re_, x_re_, zero_);
    warp_.mma_sync(d_re_, f_im_neg_, x_im_, d_re_);
    warp_.mma_sync(d_im_, f_re_, x_im_, zero_);
    warp_.mma_sync(d_im_, f_im_, x_re_, d_im_);
    store_matrix_sync(std::span<Operand>(out_re_.data(), out_re_.size()), d_re_, kTileDim);
    store_matrix_sync(std::span<Operand>(out_im_.data(), out_im_.size()), d_im_, kTileDim);

    for (std::size_t j = 0; j < kTileDim; ++j) {
      if (cols[j] == kPadColumn) continue;
      const auto col = static_cast<std::size_t>(cols[j]);
      const std::size_t base = (col / n2) * n + col % n2;
      for (std::size_t r = 0; r < kTileDim; ++r) {
        seg[base + r * n2] = P::make(out_re_[r * kTileDim + j], out_im_[r * kTileDim + j]);
      }
    }
  }

  stats_.mma_calls += warp_.mma_calls() - calls_before;
  stats_.mma_columns += columns;
  stats_.mma_work += columns * 32;
  ++stats_.radix16_steps;
}

template <class P>
void MergeEngine<P>::radix2_submerge(StridedSpan<Complex> seg, std::size_t n2) {
  check_block(seg.len, n2, 2);
  const std::size_t n = 2 * n2;
  const std::size_t columns = seg.len / 2;
  for (const ColumnRun& run : gather_continuous(columns, options_.continuous_size)) {
    for (std::size_t c = run.first; c < run.first + run.count; ++c) {
      const std::size_t k = c % n2;
      const std::size_t i0 = (c / n2) * n + k;
      const std::size_t i1 = i0 + n2;
      const Complex a = seg[i0];
      const Complex p = P::mul(seg[i1], P::twiddle(1, k, n));
      const double ar = P::wide(P::re(a));
      const double ai = P::wide(P::im(a));
      const double pr = P::wide(P::re(p));
      const double pi = P::wide(P::im(p));
      seg[i0] = P::make(P::narrow(ar + pr), P::narrow(ai + pi));
      seg[i1] = P::make(P::narrow(ar - pr), P::narrow(ai - pi));
    }
  }
  stats_.scalar_butterflies += columns;
  stats_.scalar_work += columns;
  ++stats_.scalar_steps;
}

// F_4 has entries in {±1, ±i}: the product is formed with adds, negations
// and re/im swaps only. Each output component is one exact real-64 sum of
// four operands, rounded once.
template <class P>
void MergeEngine<P>::radix4_submerge(StridedSpan<Complex> seg, std::size_t n2) {
  check_block(seg.len, n2, 4);
  const std::size_t n = 4 * n2;
  const std::size_t columns = seg.len / 4;
  for (const ColumnRun& run : gather_continuous(columns, options_.continuous_size)) {
    for (std::size_t c = run.first; c < run.first + run.count; ++c) {
      const std::size_t k = c % n2;
      const std::size_t base = (c / n2) * n + k;
      std::array<double, 4> re{};
      std::array<double, 4> im{};
      for (std::size_t m = 0; m < 4; ++m) {
        Complex v = seg[base + m * n2];
        if (m != 0) v = P::mul(v, P::twiddle(m, k, n));
        re[m] = P::wide(P::re(v));
        im[m] = P::wide(P::im(v));
      }
      seg[base] = P::make(P::narrow(re[0] + re[1] + re[2] + re[3]), P::narrow(im[0] + im[1] + im[2] + im[3]));
      seg[base + n2] =
          P::make(P::narrow(re[0] + im[1] - re[2] - im[3]), P::narrow(im[0] - re[1] - im[2] + re[3]));
      seg[base + 2 * n2] =
          P::make(P::narrow(re[0] - re[1] + re[2] - re[3]), P::narrow(im[0] - im[1] + im[2] - im[3]));
      seg[base + 3 * n2] =
          P::make(P::narrow(re[0] - im[1] - re[2] + im[3]), P::narrow(im[0] + re[1] - im[2] - re[3]));
    }
  }
  stats_.scalar_butterflies += columns;
  stats_.scalar_work += columns * 4;
  ++stats_.scalar_steps;
}

template <class P>
void MergeEngine<P>::submerge(int radix, StridedSpan<Complex> seg, std::size_t n2) {
  switch (radix) {
    case 16:
      radix16_submerge(seg, n2);
      break;
    case 4:
      radix4_submerge(seg, n2);
      break;
    case 2:
      radix2_submerge(seg, n2);
      break;
    default:
      throw UnsupportedSize("no sub-merge for radix " + std::to_string(radix));
  }
}

template <class P>
void MergeEngine<P>::run_merge_kernel(const MergeKernel& kernel, StridedSpan<Complex> seg, std::size_t n2) {
  check_block(seg.len, n2, kernel.radix);
  const std::size_t kernel_len = n2 * static_cast<std::size_t>(kernel.radix);
  const auto tiers = exchange_tiers(kernel, n2);
  for (std::size_t off = 0; off < seg.len; off += kernel_len) {
    const StridedSpan<Complex> part = seg.sub(off, kernel_len);
    std::size_t sub_n2 = n2;
    for (std::size_t i = 0; i < kernel.sub_merges.size(); ++i) {
      const int r = kernel.sub_merges[i].radix;
      submerge(r, part, sub_n2);
      sub_n2 *= static_cast<std::size_t>(r);
      // Intermediate exchanges stay inside the segment.
      if (i + 1 < kernel.sub_merges.size() && tiers[i] == ExchangeTier::global) {
        throw ContractError("merging kernel exchanges data outside its segment");
      }
    }
    if (sub_n2 != kernel_len) throw ContractError("sub-merge radices do not compose to the kernel radix");
  }
}

template class MergeEngine<HalfPrecision>;
template class MergeEngine<HalfPrecisionFp16Accum>;
template class MergeEngine<DoublePrecision>;

}  // namespace tcfft
