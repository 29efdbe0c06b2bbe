#include "tcfft/mma.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <json.hpp>

namespace tcfft {

FragmentMap::FragmentMap(std::vector<std::vector<TilePos>> lanes) {
  if (lanes.size() != kWarpSize) throw ContractError("fragment map needs exactly 32 lanes");
  num_elements_ = static_cast<int>(lanes.front().size());
  if (num_elements_ == 0) throw ContractError("fragment map lanes are empty");
  slots_.reserve(static_cast<std::size_t>(kWarpSize * num_elements_));
  for (int lane = 0; lane < kWarpSize; ++lane) {
    const auto& list = lanes[static_cast<std::size_t>(lane)];
    if (static_cast<int>(list.size()) != num_elements_) {
      throw ContractError("fragment map lanes have unequal lengths");
    }
    for (const TilePos p : list) {
      if (p.row < 0 || p.row >= kTileDim || p.col < 0 || p.col >= kTileDim) {
        throw ContractError("fragment map position outside the 16x16 tile");
      }
      auto& own = owners_[static_cast<std::size_t>(p.index())];
      if (!own.empty() && own.back() == lane) {
        throw ContractError("lane stores the same element twice");
      }
      own.push_back(lane);
      slots_.push_back(p);
    }
  }
  for (int idx = 0; idx < kTileElems; ++idx) {
    if (owners_[static_cast<std::size_t>(idx)].empty()) {
      throw ContractError("tile element " + std::to_string(idx) + " has no owner");
    }
  }
}

TilePos FragmentMap::calc_eid(int lane, int i) const {
  if (lane < 0 || lane >= kWarpSize || i < 0 || i >= num_elements_) {
    throw BoundsError("calc_eid: lane or element index out of range");
  }
  return slots_[static_cast<std::size_t>(lane * num_elements_ + i)];
}

std::span<const TilePos> FragmentMap::lane(int lane) const {
  if (lane < 0 || lane >= kWarpSize) throw BoundsError("lane out of range");
  return {slots_.data() + static_cast<std::size_t>(lane * num_elements_),
          static_cast<std::size_t>(num_elements_)};
}

std::span<const int> FragmentMap::owners(TilePos pos) const {
  return owners_.at(static_cast<std::size_t>(pos.index()));
}

FragmentMap FragmentMap::row_cyclic(int shift) {
  std::vector<std::vector<TilePos>> lanes(kWarpSize, std::vector<TilePos>(8));
  for (int row = 0; row < kTileDim; ++row) {
    for (int col = 0; col < kTileDim; ++col) {
      const int lane = (row % 4) * 8 + col / 2;
      const int i = (row / 4) * 2 + col % 2;
      const int shifted = ((row + shift) % kTileDim + kTileDim) % kTileDim;
      lanes[static_cast<std::size_t>(lane)][static_cast<std::size_t>(i)] = {shifted, col};
    }
  }
  return FragmentMap(std::move(lanes));
}

FragmentMap FragmentMap::row_interleaved() { return row_cyclic(0); }

FragmentMap FragmentMap::replicated_pairs() {
  std::vector<std::vector<TilePos>> lanes(kWarpSize);
  for (int lane = 0; lane < kWarpSize; ++lane) {
    const int g = (lane & 3) + 4 * (lane >> 3);
    const int col = g / 2;
    const int row0 = (g % 2) * 8;
    auto& list = lanes[static_cast<std::size_t>(lane)];
    for (int c : {col, col + 8}) {
      for (int r = 0; r < 8; ++r) list.push_back({row0 + r, c});
    }
  }
  return FragmentMap(std::move(lanes));
}

FragmentMap FragmentMap::random(std::uint64_t seed) {
  std::vector<int> perm(kTileElems);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<TilePos>> lanes(kWarpSize);
  for (int j = 0; j < kTileElems; ++j) {
    const int idx = perm[static_cast<std::size_t>(j)];
    lanes[static_cast<std::size_t>(j / 8)].push_back({idx / kTileDim, idx % kTileDim});
  }
  return FragmentMap(std::move(lanes));
}

std::string FragmentMap::to_json() const {
  nlohmann::ordered_json lanes = nlohmann::ordered_json::array();
  for (int lane = 0; lane < kWarpSize; ++lane) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const TilePos p : this->lane(lane)) list.push_back({{"row", p.row}, {"col", p.col}});
    lanes.push_back(std::move(list));
  }
  nlohmann::ordered_json doc;
  doc["lanes"] = std::move(lanes);
  return doc.dump();
}

std::shared_ptr<const FragmentMap> default_fragment_map() {
  static const auto map = std::make_shared<const FragmentMap>(FragmentMap::row_interleaved());
  return map;
}

FragmentMap probe_map(const FragmentOracle& oracle) {
  std::array<Half, kTileElems> sentinels{};
  for (int idx = 0; idx < kTileElems; ++idx) sentinels[static_cast<std::size_t>(idx)] = round_to_half(idx);
  const LaneContents contents = oracle(std::span<const Half, kTileElems>(sentinels));

  std::vector<std::vector<TilePos>> lanes(kWarpSize);
  for (int lane = 0; lane < kWarpSize; ++lane) {
    for (const Half v : contents[static_cast<std::size_t>(lane)]) {
      const double d = v.to_double();
      if (!(d >= 0.0 && d < kTileElems) || d != static_cast<int>(d)) {
        throw ProbeError("lane " + std::to_string(lane) + " holds a value that is not a sentinel");
      }
      const int idx = static_cast<int>(d);
      lanes[static_cast<std::size_t>(lane)].push_back({idx / kTileDim, idx % kTileDim});
    }
  }
  try {
    return FragmentMap(std::move(lanes));
  } catch (const ContractError& e) {
    throw ProbeError(std::string("inconsistent probe observations: ") + e.what());
  }
}

FragmentOracle emulator_oracle(std::shared_ptr<const FragmentMap> map) {
  return [map = std::move(map)](std::span<const Half, kTileElems> tile) {
    Fragment<Half> frag(FragmentKind::matrix_b, Layout::row_major, map);
    load_matrix_sync(frag, std::span<const Half>(tile.data(), tile.size()), kTileDim);
    LaneContents out;
    for (int lane = 0; lane < kWarpSize; ++lane) {
      for (int i = 0; i < frag.num_elements(); ++i) out[static_cast<std::size_t>(lane)].push_back(frag.x(lane, i));
    }
    return out;
  };
}

}  // namespace tcfft
