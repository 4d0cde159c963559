#pragma once

#include "rseries/real.hpp"

#include <string>
#include <vector>

namespace rseries {

/// A function value sampled at a grid point.
struct Sample {
  Real x;
  Real value;
};

/// Geometric grid x_j = start * ratio^j, descending toward 0 and stopping
/// once x_j drops below `floor`.
struct GridSpec {
  Real start;
  Real ratio;
  Real floor;

  /// Probe defaults: 1e-2 down to 1e-25 with four points per decade.
  static GridSpec probe_default();
  /// Same spacing as the probe grid, starting at `start`.
  static GridSpec from(const Real& start);

  std::vector<Real> points() const;
  /// Inserts `per_step` - 1 extra points in every gap of the grid.
  GridSpec refined(unsigned per_step) const;
  std::string describe() const;
};

/// Throws std::invalid_argument unless 0 < floor <= start and 0 < ratio < 1.
void validate(const GridSpec& grid);

}  // namespace rseries
