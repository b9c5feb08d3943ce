#include "ldpse/quantizer.hpp"

#include <atomic>
#include <iostream>
#include <string>

#include "ldpse/error.hpp"

namespace ldpse {

QuantizationScheme build_scheme(int level_count, double max_energy,
                                std::optional<Eigen::ArrayXd> boundaries) {
  require(level_count >= 2, "build_scheme: level_count must be at least 2");
  if (boundaries) {
    const Eigen::ArrayXd& b = *boundaries;
    require(b.size() == level_count + 1,
            "build_scheme: expected " + std::to_string(level_count + 1) +
                " boundaries, got " + std::to_string(b.size()));
    require(b(0) == 0.0, "build_scheme: first boundary must be 0");
    for (Eigen::Index i = 1; i < b.size(); ++i) {
      require(b(i) > b(i - 1), "build_scheme: boundaries must be strictly increasing");
    }
    return QuantizationScheme{b};
  }
  require(max_energy > 0.0, "build_scheme: max_energy must be positive");
  Eigen::ArrayXd b = Eigen::ArrayXd::LinSpaced(level_count + 1, 0.0, max_energy);
  return QuantizationScheme{std::move(b)};
}

int map_reading(double watts, const QuantizationScheme& scheme) {
  require(watts >= 0.0, "map_reading: negative energy value");
  const int d = scheme.level_count();
  if (watts == 0.0) return 1;
  if (watts > scheme.max_energy()) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true)) {
      std::cerr << "ldpse: warning: reading above scheme max, clamping to top level\n";
    }
    return d;
  }
  // First boundary with watts <= boundaries[l]; boundaries are sorted.
  const double* begin = scheme.boundaries.data() + 1;
  const double* end = scheme.boundaries.data() + scheme.boundaries.size();
  const double* it = std::lower_bound(begin, end, watts);
  return static_cast<int>(it - begin) + 1;
}

BitArray encode_level(int level, int level_count) {
  require(level >= 1 && level <= level_count, "encode_level: level out of range");
  BitArray block = BitArray::Zero(level_count);
  block(level_count - level) = 1;  // level 1 is the rightmost position
  return block;
}

int decode_block(const BitArray& block) {
  int level = 0;
  int ones = 0;
  for (Eigen::Index i = 0; i < block.size(); ++i) {
    if (block(i)) {
      ++ones;
      level = static_cast<int>(block.size() - i);
    }
  }
  require(ones == 1, "decode_block: block is not one-hot");
  return level;
}

EncodedVector build_combined_vector(const std::vector<ApplianceReading>& readings,
                                    const QuantizationScheme& scheme, int roster_size) {
  require(roster_size >= 1, "build_combined_vector: empty roster");
  const int d = scheme.level_count();
  std::vector<double> values(static_cast<std::size_t>(roster_size), 0.0);
  std::vector<bool> seen(static_cast<std::size_t>(roster_size), false);
  for (const ApplianceReading& r : readings) {
    require(r.appliance_id >= 1 && r.appliance_id <= roster_size,
            "build_combined_vector: appliance " + std::to_string(r.appliance_id) +
                " outside roster of " + std::to_string(roster_size));
    const std::size_t idx = static_cast<std::size_t>(r.appliance_id - 1);
    require(!seen[idx], "build_combined_vector: duplicate appliance " +
                            std::to_string(r.appliance_id));
    seen[idx] = true;
    values[idx] = r.watts;
  }

  EncodedVector out;
  out.appliance_count = roster_size;
  out.level_count = d;
  out.bits = BitArray::Zero(static_cast<Eigen::Index>(roster_size) * d);
  for (int a = 0; a < roster_size; ++a) {
    const int level = map_reading(values[static_cast<std::size_t>(a)], scheme);
    out.bits(static_cast<Eigen::Index>(a) * d + (d - level)) = 1;
  }
  return out;
}

}  // namespace ldpse
