#pragma once

// Emulated warp-level 16x16x16 matrix multiply-accumulate.
//
// A Fragment is a 16x16 tile spread over the registers of 32 lanes. Which
// tile element each register slot holds is described by a FragmentMap; the
// map is pluggable because vendor layouts differ across architectures and
// fragment parameters. Arithmetic (mma_sync) is defined on the reassembled
// tiles, so its result never depends on the map.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "tcfft/error.hpp"
#include "tcfft/half.hpp"
#include "tcfft/scratch.hpp"

namespace tcfft {

inline constexpr int kWarpSize = 32;
inline constexpr int kTileDim = 16;
inline constexpr int kTileElems = kTileDim * kTileDim;

struct TilePos {
  int row = 0;
  int col = 0;

  constexpr int index() const { return row * kTileDim + col; }
  friend constexpr bool operator==(TilePos, TilePos) = default;
};

enum class FragmentKind { matrix_a, matrix_b, accumulator };
enum class Layout { row_major, col_major };

class FragmentMap {
 public:
  // One list of tile positions per lane; lists must have equal length and
  // together cover every tile position at least once.
  explicit FragmentMap(std::vector<std::vector<TilePos>> lanes);

  int num_elements() const { return num_elements_; }
  TilePos calc_eid(int lane, int i) const;
  std::span<const TilePos> lane(int lane) const;
  // Lanes holding a tile position, ascending.
  std::span<const int> owners(TilePos pos) const;

  // lane = (row % 4) * 8 + col / 2; slot i = (row / 4) * 2 + col % 2.
  static FragmentMap row_interleaved();
  // Same as row_interleaved with tile rows rotated by `shift`.
  static FragmentMap row_cyclic(int shift);
  // Every element held by two lanes (L and L ^ 4). Lane group
  // g = (L & 3) + 4 * (L >> 3) owns columns g/2 and g/2 + 8 over rows
  // 0-7 (g even) or 8-15 (g odd), stored down the first column then the
  // second. Element (1, 4) lands in lanes 16 and 20; lanes 0 and 4 store
  // column 0 top to bottom.
  static FragmentMap replicated_pairs();
  // Uniformly random bijection with 8 elements per lane.
  static FragmentMap random(std::uint64_t seed);

  std::string to_json() const;

  friend bool operator==(const FragmentMap& a, const FragmentMap& b) {
    return a.num_elements_ == b.num_elements_ && a.slots_ == b.slots_;
  }

 private:
  int num_elements_ = 0;
  std::vector<TilePos> slots_;  // lane * num_elements + i
  std::array<std::vector<int>, kTileElems> owners_;
};

std::shared_ptr<const FragmentMap> default_fragment_map();

inline TilePos calc_eid(int lane, int i, const FragmentMap& map) { return map.calc_eid(lane, i); }

template <class T>
using Tile = std::array<T, kTileElems>;

template <class T>
class Fragment {
 public:
  Fragment(FragmentKind kind, Layout layout, std::shared_ptr<const FragmentMap> map)
      : kind_(kind),
        layout_(layout),
        map_(std::move(map)),
        regs_(static_cast<std::size_t>(kWarpSize * map_->num_elements())) {}

  FragmentKind kind() const { return kind_; }
  Layout layout() const { return layout_; }
  const FragmentMap& map() const { return *map_; }
  const std::shared_ptr<const FragmentMap>& map_ptr() const { return map_; }
  int num_elements() const { return map_->num_elements(); }

  // fragment::x[i] of one lane
  T& x(int lane, int i) { return regs_[slot(lane, i)]; }
  const T& x(int lane, int i) const { return regs_[slot(lane, i)]; }

  // Throws ContractError when replicated owners disagree.
  Tile<T> reassemble() const {
    Tile<T> tile{};
    std::array<bool, kTileElems> seen{};
    const int ne = num_elements();
    for (int lane = 0; lane < kWarpSize; ++lane) {
      for (int i = 0; i < ne; ++i) {
        const int idx = map_->calc_eid(lane, i).index();
        const T& v = regs_[slot(lane, i)];
        if (seen[idx] && !(tile[idx] == v)) {
          throw ContractError("fragment replicas disagree at element " + std::to_string(idx));
        }
        tile[idx] = v;
        seen[idx] = true;
      }
    }
    return tile;
  }

  // Writes every owner of every element.
  void distribute(const Tile<T>& tile) {
    const int ne = num_elements();
    for (int lane = 0; lane < kWarpSize; ++lane) {
      for (int i = 0; i < ne; ++i) regs_[slot(lane, i)] = tile[map_->calc_eid(lane, i).index()];
    }
  }

 private:
  std::size_t slot(int lane, int i) const {
    return static_cast<std::size_t>(lane * map_->num_elements() + i);
  }

  FragmentKind kind_;
  Layout layout_;
  std::shared_ptr<const FragmentMap> map_;
  TrackedBuffer<T> regs_;
};

// Element conversions used when moving values between memory and fragments.
template <class To, class From>
To convert_element(From v) {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else if constexpr (std::is_same_v<To, Half>) {
    return round_to_half(static_cast<double>(v));
  } else if constexpr (std::is_same_v<From, Half>) {
    return static_cast<To>(v.to_float());
  } else {
    return static_cast<To>(v);
  }
}

namespace detail {

inline std::size_t tile_offset(int row, int col, std::size_t ld, Layout layout) {
  return layout == Layout::row_major ? static_cast<std::size_t>(row) * ld + col
                                     : static_cast<std::size_t>(col) * ld + row;
}

inline void check_tile_bounds(std::size_t size, std::size_t ld) {
  if (ld < kTileDim) throw BoundsError("leading dimension smaller than 16");
  if ((kTileDim - 1) * ld + kTileDim > size) throw BoundsError("tile view exceeds memory");
}

}  // namespace detail

// Fragment elements are read from `mem` (16x16 tile, leading dimension `ld`,
// interpreted in the fragment's layout).
template <class T, class U>
void load_matrix_sync(Fragment<T>& frag, std::span<const U> mem, std::size_t ld) {
  detail::check_tile_bounds(mem.size(), ld);
  const int ne = frag.num_elements();
  for (int lane = 0; lane < kWarpSize; ++lane) {
    for (int i = 0; i < ne; ++i) {
      const TilePos p = frag.map().calc_eid(lane, i);
      frag.x(lane, i) = convert_element<T>(mem[detail::tile_offset(p.row, p.col, ld, frag.layout())]);
    }
  }
}

// Accumulator fragments stored to Half memory are rounded once per element.
template <class U, class T>
void store_matrix_sync(std::span<U> mem, const Fragment<T>& frag, std::size_t ld) {
  detail::check_tile_bounds(mem.size(), ld);
  const int ne = frag.num_elements();
  for (int lane = 0; lane < kWarpSize; ++lane) {
    for (int i = 0; i < ne; ++i) {
      const TilePos p = frag.map().calc_eid(lane, i);
      mem[detail::tile_offset(p.row, p.col, ld, frag.layout())] = convert_element<U>(frag.x(lane, i));
    }
  }
}

template <class T, class V>
void fill_fragment(Fragment<T>& frag, V value) {
  const T v = convert_element<T>(value);
  const int ne = frag.num_elements();
  for (int lane = 0; lane < kWarpSize; ++lane) {
    for (int i = 0; i < ne; ++i) frag.x(lane, i) = v;
  }
}

namespace detail {

// One multiply-accumulate step in accumulator precision.
template <class Acc, class In>
Acc mac(Acc sum, In a, In b) {
  if constexpr (std::is_same_v<Acc, Half>) {
    // FP16 accumulate: exact product, rounded sum.
    return round_to_half(sum.to_double() + a.to_double() * b.to_double());
  } else if constexpr (std::is_same_v<In, Half>) {
    // Half products are exact in real-32.
    return sum + static_cast<Acc>(a.to_float()) * static_cast<Acc>(b.to_float());
  } else {
    return sum + static_cast<Acc>(a) * static_cast<Acc>(b);
  }
}

}  // namespace detail

// D = A * B + C. Per element: start from C, add the 16 products in ascending
// k order, every step in accumulator precision.
template <class Acc, class In>
void mma_sync(Fragment<Acc>& d, const Fragment<In>& a, const Fragment<In>& b, const Fragment<Acc>& c) {
  if (a.kind() != FragmentKind::matrix_a || b.kind() != FragmentKind::matrix_b ||
      c.kind() != FragmentKind::accumulator || d.kind() != FragmentKind::accumulator) {
    throw ContractError("mma_sync: fragment kinds must be (accumulator, matrix_a, matrix_b, accumulator)");
  }
  const Tile<In> ta = a.reassemble();
  const Tile<In> tb = b.reassemble();
  const Tile<Acc> tc = c.reassemble();
  Tile<Acc> td{};
  for (int r = 0; r < kTileDim; ++r) {
    for (int col = 0; col < kTileDim; ++col) {
      Acc sum = tc[r * kTileDim + col];
      for (int k = 0; k < kTileDim; ++k) {
        sum = detail::mac(sum, ta[r * kTileDim + k], tb[k * kTileDim + col]);
      }
      td[r * kTileDim + col] = sum;
    }
  }
  d.distribute(td);
}

// 32 simulated lanes sharing one fragment map. Counts issued MMAs.
class Warp {
 public:
  explicit Warp(std::shared_ptr<const FragmentMap> map = default_fragment_map()) : map_(std::move(map)) {}

  const std::shared_ptr<const FragmentMap>& map() const { return map_; }
  std::uint64_t mma_calls() const { return mma_calls_; }
  void reset_counters() { mma_calls_ = 0; }

  template <class T>
  Fragment<T> make_fragment(FragmentKind kind, Layout layout = Layout::row_major) const {
    return Fragment<T>(kind, layout, map_);
  }

  template <class Acc, class In>
  void mma_sync(Fragment<Acc>& d, const Fragment<In>& a, const Fragment<In>& b, const Fragment<Acc>& c) {
    tcfft::mma_sync(d, a, b, c);
    ++mma_calls_;
  }

 private:
  std::shared_ptr<const FragmentMap> map_;
  std::uint64_t mma_calls_ = 0;
};

// Per-lane register contents after loading a 16x16 Half tile.
using LaneContents = std::array<std::vector<Half>, kWarpSize>;
using FragmentOracle = std::function<LaneContents(std::span<const Half, kTileElems>)>;

// Recovers a map by loading 256 distinct sentinels through `oracle` and
// reading back what each lane stores. Throws ProbeError on inconsistent
// observations.
FragmentMap probe_map(const FragmentOracle& oracle);

// Oracle backed by this emulator's load_matrix_sync for a given map.
FragmentOracle emulator_oracle(std::shared_ptr<const FragmentMap> map);

}  // namespace tcfft
