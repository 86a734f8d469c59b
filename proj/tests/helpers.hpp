#pragma once

#include <string>
#include <vector>

#include "vost/charlib.hpp"
#include "vost/netlist.hpp"

namespace vost::test {

inline std::string fixture(const std::string& name) {
  return std::string(VOST_FIXTURE_DIR) + "/" + name;
}

//! Default synthetic multi-voltage library built from the shipped nominal
//! table.
inline CharLib default_lib(const std::vector<double>& voltages = {1.0, 0.9,
                                                                  0.8, 0.7}) {
  const CharLib nominal = load_charlib_file(fixture("charlib_nominal_1v.csv"));
  return synth_charlib(nominal, voltages);
}

//! Library with the nominal means but near-zero spread, for degenerate-limit
//! checks.
inline CharLib zero_sigma_lib(double sigma = 1e-6) {
  const CharLib nominal = load_charlib_file(fixture("charlib_nominal_1v.csv"));
  CharLib out;
  for (GateKind kind : {GateKind::NOT, GateKind::AND2, GateKind::OR2,
                        GateKind::NAND2, GateKind::NOR2, GateKind::XOR2,
                        GateKind::XNOR2}) {
    for (unsigned code = 0; code < transition_count(kind); ++code) {
      const TransitionPair tr = transition_from_code(code, arity(kind));
      if (!nominal.has(kind, tr, 1.0)) continue;
      out.insert(kind, tr, 1.0,
                 CharEntry{nominal.lookup(kind, tr, 1.0).mu_ps, sigma});
    }
  }
  return out;
}

} // namespace vost::test
