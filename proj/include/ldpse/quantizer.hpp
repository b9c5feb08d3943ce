#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace ldpse {

using BitArray = Eigen::Array<std::uint8_t, Eigen::Dynamic, 1>;

// Ordered energy ranges mapped onto discrete levels. Level l covers the
// half-open range (boundaries[l-1], boundaries[l]]; a reading of exactly 0
// belongs to level 1 so that every non-negative value is representable.
struct QuantizationScheme {
  Eigen::ArrayXd boundaries;  // d+1 strictly increasing values, first = 0

  int level_count() const { return static_cast<int>(boundaries.size()) - 1; }
  double max_energy() const { return boundaries(boundaries.size() - 1); }
  double level_midpoint(int level) const {
    return 0.5 * (boundaries(level - 1) + boundaries(level));
  }
};

struct ApplianceReading {
  int appliance_id = 0;  // 1-based index into the provider's roster
  double watts = 0.0;
};

// Flattened one-hot blocks for all roster appliances; length = d * n.
struct EncodedVector {
  BitArray bits;
  int appliance_count = 0;
  int level_count = 0;

  Eigen::Index size() const { return bits.size(); }
};

// Equal-width levels over [0, max_energy] unless explicit boundaries are given.
QuantizationScheme build_scheme(int level_count, double max_energy,
                                std::optional<Eigen::ArrayXd> boundaries = std::nullopt);

// Unique level with boundaries[l-1] < watts <= boundaries[l]; 0 maps to level 1
// and values above max clamp to the top level (warned once per process).
int map_reading(double watts, const QuantizationScheme& scheme);

// One-hot block of length d with level 1 in the rightmost bit position.
BitArray encode_level(int level, int level_count);

// Level recovered from a freshly encoded one-hot block.
int decode_block(const BitArray& block);

// Concatenates one encoded block per roster appliance, in roster order.
// Appliances missing from `readings` are reported as 0 W (level 1).
EncodedVector build_combined_vector(const std::vector<ApplianceReading>& readings,
                                    const QuantizationScheme& scheme, int roster_size);

}  // namespace ldpse
