#pragma once

#include <cmath>
#include <cstdint>

#include "vost/errors.hpp"

namespace vost {

//! Uniform time grid over [0, t_max] picoseconds. Cell k covers
//! [k*dt, (k+1)*dt); densities stored on this grid are piecewise constant.
struct GridConfig {
  double dt = 0.5;     // ps per cell
  int64_t cells = 800; // t_max = cells * dt

  static GridConfig make(double dt, double t_max) {
    if (!(dt > 0.0)) throw numeric_error("grid: dt must be > 0");
    const double n = t_max / dt;
    const auto cells = static_cast<int64_t>(std::llround(n));
    if (std::abs(n - static_cast<double>(cells)) > 1e-6)
      throw numeric_error("grid: t_max must be an integer multiple of dt");
    if (cells < 10) throw numeric_error("grid: t_max must be >= 10*dt");
    if (cells > (int64_t{1} << 22))
      throw numeric_error("grid: t_max/dt exceeds 2^22 cells");
    return GridConfig{dt, cells};
  }

  double t_max() const { return static_cast<double>(cells) * dt; }
  double cell_start(int64_t k) const { return static_cast<double>(k) * dt; }
  double cell_center(int64_t k) const {
    return (static_cast<double>(k) + 0.5) * dt;
  }

  //! Cell index for a time point; times at or beyond t_max saturate into the
  //! last cell.
  int64_t cell_of(double t) const {
    if (t <= 0.0) return 0;
    auto k = static_cast<int64_t>(std::floor(t / dt));
    return k >= cells ? cells - 1 : k;
  }

  bool operator==(const GridConfig&) const = default;
};

inline void require_same_grid(const GridConfig& a, const GridConfig& b) {
  if (!(a == b)) throw numeric_error("grid mismatch between distributions");
}

} // namespace vost
