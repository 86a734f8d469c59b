#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vost/gates.hpp"

namespace vost {

//! Gaussian delay parameters of one (gate, input transition, voltage) point.
struct CharEntry {
  double mu_ps = 0.0;
  double sigma_ps = 0.0;
  bool operator==(const CharEntry&) const = default;
};

//! State-dependent gate delay table over a sorted voltage grid. Entries for
//! transitions that do not change the gate output may be present but are
//! never consulted (those transitions have zero propagation delay by
//! definition). Immutable after load; lookups between grid voltages
//! interpolate mu and sigma linearly.
class CharLib {
public:
  void insert(GateKind kind, TransitionPair tr, double vdd, CharEntry e);

  //! Entry at vdd, interpolated when vdd lies between grid voltages.
  //! Throws numeric errors for voltages outside the grid or transitions
  //! without an entry.
  CharEntry lookup(GateKind kind, TransitionPair tr, double vdd) const;

  bool has(GateKind kind, TransitionPair tr, double vdd) const;

  const std::vector<double>& voltages() const { return voltages_; }

  //! Keys (kind, transition, vdd) that a complete library must contain but
  //! this one does not: every output-changing transition of every gate kind
  //! present, at every grid voltage.
  std::vector<std::string> missing_keys() const;

private:
  struct PerKind {
    // voltage -> entry, per transition code
    std::vector<std::map<double, CharEntry>> by_transition;
  };
  std::map<GateKind, PerKind> kinds_;
  std::vector<double> voltages_;
};

//! Parse the CSV schema `gate,prev,next,vdd,mu_ps,sigma_ps` (header row
//! required; prev/next are MSB-first bit strings in declared input order).
//! Throws a parse error carrying the line number, or an incomplete-library
//! error listing every missing key.
CharLib load_charlib(std::istream& in);
CharLib load_charlib_file(const std::string& path);

void save_charlib(const CharLib& lib, std::ostream& out);
void save_charlib_file(const CharLib& lib, const std::string& path);

//! Scale factor of the synthetic voltage law relative to the 1.0 V nominal:
//! f(V) = V * (1 - vth)^alpha / (V - vth)^alpha. Grows as V drops toward vth.
double voltage_scale_factor(double vdd, double vth, double alpha_exp);

//! Build a multi-voltage library from the nominal 1.0 V entries by scaling
//! mu and sigma with voltage_scale_factor. Defaults: vth 0.3 V, alpha 1.3.
CharLib synth_charlib(const CharLib& nominal, const std::vector<double>& voltages,
                      double vth = 0.3, double alpha_exp = 1.3);

} // namespace vost
