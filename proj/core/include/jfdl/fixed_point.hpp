#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace jfdl {

/// Travel costs and objective values are kept as scaled integers so that
/// objective comparisons, flow costs and binary-search thresholds are exact.
using Cost = std::int64_t;
using Flow = std::int64_t;

inline constexpr Cost kDefaultScale = 1000;

/// Scales a real-valued cost into fixed-point units (round to nearest).
inline Cost to_fixed(double value, Cost scale) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("cost value must be finite");
  }
  return static_cast<Cost>(std::llround(value * static_cast<double>(scale)));
}

/// Converts a fixed-point cost back to a real value.
inline double to_real(Cost value, Cost scale) {
  return static_cast<double>(value) / static_cast<double>(scale);
}

}  // namespace jfdl
