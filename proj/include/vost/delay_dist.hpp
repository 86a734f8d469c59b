#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <utility>
#include <vector>

#include "vost/grid.hpp"

namespace vost {

//! Sub-probability delay distribution: a point mass at exactly t = 0 plus a
//! piecewise-constant density (1/ps) on the grid cells. Total mass may be
//! below 1 for scenario branches ("defective" distributions); negative
//! delays are unrepresentable.
class DelayDist {
public:
  explicit DelayDist(const GridConfig& cfg)
      : cfg_(cfg), atom_(0.0),
        density_(Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(cfg.cells))) {}

  DelayDist(const GridConfig& cfg, double atom, Eigen::ArrayXd density);

  const GridConfig& grid() const { return cfg_; }
  double atom_weight() const { return atom_; }
  const Eigen::ArrayXd& density() const { return density_; }

  double mass() const { return atom_ + density_.sum() * cfg_.dt; }

  //! First moment, with each cell's mass placed at its center.
  double mean() const;

  // in-place accumulation used by mixture builders
  void accumulate(double weight, const DelayDist& other);
  void scale(double factor) {
    atom_ *= factor;
    density_ *= factor;
  }

private:
  GridConfig cfg_;
  double atom_;
  Eigen::ArrayXd density_;
};

//! Unit point mass at t = 0 (zero propagation delay).
DelayDist delta(const GridConfig& cfg);

//! Normal(mu, sigma) rendered onto the grid. Mass below t = 0 is folded into
//! the first cell and mass above t_max into the last, so the result is
//! complete. Throws if mu + 6*sigma does not fit on the grid.
DelayDist gaussian(double mu_ps, double sigma_ps, const GridConfig& cfg);

//! Pointwise weighted sum; weights need not sum to 1.
DelayDist mix(const std::vector<std::pair<double, const DelayDist*>>& terms);

//! Distribution of the sum of two independent delays. Mass that would land
//! beyond t_max accumulates in the last cell. mass(out) = mass(a)*mass(b).
DelayDist convolve(const DelayDist& a, const DelayDist& b);

//! Multiply by the step U(t - t0): the atom is dropped when t0 > 0 and all
//! density below t0 is removed (partial cells pro-rated). Not renormalized;
//! mass(out) = P(X >= t0).
DelayDist truncate_below(const DelayDist& d, double t0_ps);

//! P(delay > t). The atom never counts for t >= 0; saturated mass in the
//! last cell counts for any t < t_max.
double exceed_prob(const DelayDist& d, double t_ps);

//! Total-variation distance: (|atom_a - atom_b| + sum |da - db|*dt) / 2.
double tv_distance(const DelayDist& a, const DelayDist& b);

//! Two-column text dump (cell center, density); atom and grid in '#' header
//! lines.
void write_dist_tsv(const DelayDist& d, std::ostream& os);

} // namespace vost
