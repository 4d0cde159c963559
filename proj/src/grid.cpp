#include "rseries/grid.hpp"

#include <stdexcept>

namespace rseries {

GridSpec GridSpec::probe_default() {
  return GridSpec{parse_real("1e-2"), pow(Real(10), Real(-1) / 4), parse_real("1e-25")};
}

GridSpec GridSpec::from(const Real& start) {
  GridSpec grid = probe_default();
  grid.start = start;
  return grid;
}

void validate(const GridSpec& grid) {
  if (!(grid.ratio > 0 && grid.ratio < 1)) throw std::invalid_argument("grid ratio must lie in (0, 1)");
  if (!(grid.floor > 0)) throw std::invalid_argument("grid floor must be positive");
  if (!(grid.start >= grid.floor)) throw std::invalid_argument("grid start must be at least the floor");
}

std::vector<Real> GridSpec::points() const {
  validate(*this);
  std::vector<Real> out;
  // Powers are taken directly rather than by repeated multiplication so the
  // grid carries no accumulated rounding.
  const Real cutoff = floor * (1 - parse_real("1e-12"));
  for (long j = 0;; ++j) {
    Real x = start * pow(ratio, Real(j));
    if (x < cutoff) break;
    out.push_back(std::move(x));
  }
  return out;
}

GridSpec GridSpec::refined(unsigned per_step) const {
  GridSpec out = *this;
  out.ratio = pow(ratio, Real(1) / Real(per_step));
  return out;
}

std::string GridSpec::describe() const {
  return "geometric grid " + to_short_string(start, 6) + " * " + to_short_string(ratio, 6) +
         "^j down to " + to_short_string(floor, 6);
}

}  // namespace rseries
