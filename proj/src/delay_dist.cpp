#include "vost/delay_dist.hpp"

#include <cmath>
#include <ostream>

namespace vost {

namespace {

double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc((mu - x) / (sigma * std::sqrt(2.0)));
}

} // namespace

DelayDist::DelayDist(const GridConfig& cfg, double atom, Eigen::ArrayXd density)
    : cfg_(cfg), atom_(atom), density_(std::move(density)) {
  if (density_.size() != static_cast<Eigen::Index>(cfg.cells))
    throw numeric_error("delay dist: density size does not match grid");
  if (atom_ < -1e-12 || (density_ < -1e-12).any())
    throw numeric_error("delay dist: negative mass");
  // clamp tiny negative floating-point noise
  atom_ = std::max(atom_, 0.0);
  density_ = density_.max(0.0);
}

double DelayDist::mean() const {
  double m = 0.0;
  for (Eigen::Index k = 0; k < density_.size(); ++k)
    m += density_[k] * cfg_.dt * cfg_.cell_center(k);
  return m; // atom contributes 0
}

void DelayDist::accumulate(double weight, const DelayDist& other) {
  require_same_grid(cfg_, other.cfg_);
  atom_ += weight * other.atom_;
  density_ += weight * other.density_;
}

DelayDist delta(const GridConfig& cfg) {
  return DelayDist(
      cfg, 1.0, Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(cfg.cells)));
}

DelayDist gaussian(double mu_ps, double sigma_ps, const GridConfig& cfg) {
  if (!(sigma_ps > 0.0)) throw numeric_error("gaussian: sigma must be > 0");
  if (mu_ps < 0.0) throw numeric_error("gaussian: mu must be >= 0");
  if (mu_ps + 6.0 * sigma_ps > cfg.t_max())
    throw numeric_error("gaussian: mu + 6*sigma exceeds grid t_max");

  const auto n = static_cast<Eigen::Index>(cfg.cells);
  Eigen::ArrayXd density = Eigen::ArrayXd::Zero(n);

  if (sigma_ps < cfg.dt) {
    // Sub-cell sigma: a cell-resolution rendering cannot hold the shape, so
    // place the mass as a point at mu split between the two nearest cell
    // centers. This keeps the first moment exact, which matters when long
    // chains of near-deterministic delays are convolved.
    const double pos = mu_ps / cfg.dt - 0.5;
    auto lo = static_cast<int64_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    const int64_t hi = std::min(lo + 1, cfg.cells - 1);
    lo = std::max<int64_t>(lo, 0);
    density[static_cast<Eigen::Index>(lo)] += (1.0 - frac) / cfg.dt;
    density[static_cast<Eigen::Index>(hi)] += frac / cfg.dt;
    return DelayDist(cfg, 0.0, std::move(density));
  }

  // exact cell masses via CDF differences; both tails folded inward
  double prev = 0.0; // CDF at cell start, with the below-zero tail folded in
  for (Eigen::Index k = 0; k < n; ++k) {
    const double next = (k == n - 1)
                            ? 1.0
                            : normal_cdf(cfg.cell_start(k + 1), mu_ps, sigma_ps);
    density[k] = (next - prev) / cfg.dt;
    prev = next;
  }
  return DelayDist(cfg, 0.0, std::move(density));
}

DelayDist mix(const std::vector<std::pair<double, const DelayDist*>>& terms) {
  if (terms.empty()) throw numeric_error("mix: no terms");
  DelayDist out(terms.front().second->grid());
  for (const auto& [w, d] : terms) {
    if (w < 0.0) throw numeric_error("mix: negative weight");
    out.accumulate(w, *d);
  }
  return out;
}

DelayDist convolve(const DelayDist& a, const DelayDist& b) {
  require_same_grid(a.grid(), b.grid());
  const GridConfig& cfg = a.grid();
  const auto n = static_cast<Eigen::Index>(cfg.cells);

  // Convolution of the two piecewise-constant densities, expressed on cell
  // masses. The product of cell i and cell j is a triangle centered on the
  // shared boundary (i+j+1)*dt, so exactly half its mass falls in cell i+j
  // and half in cell i+j+1.
  const Eigen::ArrayXd ma = a.density() * cfg.dt;
  const Eigen::ArrayXd mb = b.density() * cfg.dt;

  Eigen::ArrayXd s = Eigen::ArrayXd::Zero(2 * n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = ma[i];
    if (w != 0.0) s.segment(i, n) += w * mb;
  }

  Eigen::ArrayXd mass = Eigen::ArrayXd::Zero(n);
  double overflow = 0.0;
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    const double lower = (k > 0 && k - 1 < 2 * n - 1) ? s[k - 1] : 0.0;
    const double upper = (k < 2 * n - 1) ? s[k] : 0.0;
    const double m = 0.5 * (lower + upper);
    if (k < n)
      mass[k] = m;
    else
      overflow += m; // saturate past t_max
  }
  mass[n - 1] += overflow;

  Eigen::ArrayXd density = mass / cfg.dt;
  // cross terms with the atoms are exact shifts by zero
  density += a.atom_weight() * b.density() + b.atom_weight() * a.density();
  return DelayDist(cfg, a.atom_weight() * b.atom_weight(), std::move(density));
}

DelayDist truncate_below(const DelayDist& d, double t0_ps) {
  if (t0_ps < 0.0) throw numeric_error("truncate_below: t0 must be >= 0");
  if (t0_ps == 0.0) return d; // U(0) = 1 keeps everything including the atom
  const GridConfig& cfg = d.grid();
  Eigen::ArrayXd density = d.density();
  const auto n = static_cast<Eigen::Index>(cfg.cells);
  if (t0_ps >= cfg.t_max()) {
    density.setZero();
    return DelayDist(cfg, 0.0, std::move(density));
  }
  const auto k = static_cast<Eigen::Index>(std::floor(t0_ps / cfg.dt));
  density.head(k).setZero();
  if (k < n) {
    const double keep = (cfg.cell_start(k + 1) - t0_ps) / cfg.dt;
    density[k] *= keep;
  }
  return DelayDist(cfg, 0.0, std::move(density));
}

double exceed_prob(const DelayDist& d, double t_ps) {
  const GridConfig& cfg = d.grid();
  if (t_ps < 0.0) return d.mass();
  if (t_ps >= cfg.t_max()) return 0.0;
  const auto n = static_cast<Eigen::Index>(cfg.cells);
  const auto k = static_cast<Eigen::Index>(std::floor(t_ps / cfg.dt));
  double p = d.density().tail(n - 1 - k).sum() * cfg.dt;
  const double keep = (cfg.cell_start(k + 1) - t_ps) / cfg.dt;
  p += d.density()[k] * cfg.dt * keep;
  return p;
}

double tv_distance(const DelayDist& a, const DelayDist& b) {
  require_same_grid(a.grid(), b.grid());
  double tv = std::abs(a.atom_weight() - b.atom_weight());
  tv += ((a.density() - b.density()).abs().sum()) * a.grid().dt;
  return 0.5 * tv;
}

void write_dist_tsv(const DelayDist& d, std::ostream& os) {
  const GridConfig& cfg = d.grid();
  os << "# dt_ps " << cfg.dt << "\n# t_max_ps " << cfg.t_max()
     << "\n# atom_weight " << d.atom_weight() << "\n";
  for (Eigen::Index k = 0; k < d.density().size(); ++k)
    os << cfg.cell_center(k) << '\t' << d.density()[k] << '\n';
}

} // namespace vost
