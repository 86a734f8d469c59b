#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vost/charlib.hpp"
#include "vost/delay_dist.hpp"
#include "vost/input_model.hpp"
#include "vost/netlist.hpp"

namespace vost {

//! Per-net timing profile: for each output transition, its probability and
//! the conditional (unit-mass) delay distribution. `alpha` carries glitch
//! contributions re-assigned to the transition of their trailing edge, so
//! the no-change entries stay exact point masses at zero; `logical_alpha`
//! classifies purely by (initial, final) values. `glitch_moved` records how
//! much probability the re-assignment moved out of each no-change class
//! ([0]: 0->0 into 1->0, [1]: 1->1 into 0->1), which downstream gates use
//! to translate logical joint weights into trailing-edge terms.
struct NetProfile {
  std::array<double, 4> alpha{};
  std::array<double, 4> logical_alpha{};
  std::array<double, 2> glitch_moved{};
  std::vector<DelayDist> dist; // size 4

  static NetProfile quiescent(const GridConfig& cfg,
                              const std::array<double, 4>& probs);
};

enum class CorrMode {
  independent, //!< joint gate-input transition weight = product of marginals
  exact_joint, //!< joint weights enumerated over primary input pairs
  automatic,   //!< exact_joint when feasible, independent otherwise
};

struct AnalyzeOptions {
  double vdd = 1.0;
  GridConfig grid{};
  CorrMode corr = CorrMode::automatic;
  int max_exact_inputs = 12; // exact_joint enumeration bound (4^k pairs)
};

//! Full-circuit analysis output. Holds everything needed downstream so it
//! does not reference the Netlist it came from.
class AnalysisResult {
public:
  const GridConfig& grid() const { return grid_; }
  double vdd() const { return vdd_; }
  CorrMode corr_used() const { return corr_; }

  const NetProfile& profile(NetId id) const {
    return profiles_[static_cast<size_t>(id)];
  }
  const NetProfile& profile(const std::string& net) const;
  NetId net(const std::string& name) const;
  const std::string& net_name(NetId id) const {
    return net_names_[static_cast<size_t>(id)];
  }
  const std::vector<NetId>& outputs() const { return outputs_; }
  const std::vector<WordDef>& words() const { return words_; }
  const WordDef& word(const std::string& name) const;

  //! Total propagation delay distribution of a net: the alpha-weighted
  //! mixture over all four transitions (unit mass).
  DelayDist total_dist(NetId id) const;
  DelayDist total_dist(const std::string& net) const;

  //! P(transition completes after t_clk) per transition; identically zero
  //! for the no-change transitions.
  std::array<double, 4> violation_prob(const std::string& net,
                                       double t_clk_ps) const;

private:
  friend AnalysisResult analyze(const Netlist&, const CharLib&,
                                const InputModel&, const AnalyzeOptions&);
  GridConfig grid_;
  double vdd_ = 0.0;
  CorrMode corr_ = CorrMode::independent;
  std::vector<std::string> net_names_;
  std::unordered_map<std::string, NetId> index_;
  std::vector<NetProfile> profiles_;
  std::vector<NetId> outputs_;
  std::vector<WordDef> words_;
};

//! Per-gate delay-distribution cache shared across one analysis run.
class GaussianCache {
public:
  GaussianCache(const CharLib& lib, double vdd, const GridConfig& cfg)
      : lib_(&lib), vdd_(vdd), cfg_(cfg) {}
  const DelayDist& get(GateKind kind, TransitionPair tr);
  CharEntry entry(GateKind kind, TransitionPair tr) const {
    return lib_->lookup(kind, tr, vdd_);
  }
  const GridConfig& grid() const { return cfg_; }

private:
  const CharLib* lib_;
  double vdd_;
  GridConfig cfg_;
  std::unordered_map<unsigned, DelayDist> cache_;
};

//! Profile of one gate's output from the profiles of its inputs.
//!
//! Every joint input transition contributes one or more scenario branches:
//! plain cascades convolve the driving arrival with the gate response;
//! transitions where differently-timed input changes can expose an
//! intermediate output state split into a glitch branch (late arrival
//! truncated at the mean of the first-step response, then convolved with
//! the second-step response, booked under the trailing-edge transition) and
//! a complementary no-glitch branch. When `joint_weights` is given it
//! overrides the product-of-marginals weighting (one weight per transition
//! code).
NetProfile gate_profile(GaussianCache& gauss, GateKind kind,
                        const std::vector<const NetProfile*>& inputs,
                        const double* joint_weights = nullptr);

AnalysisResult analyze(const Netlist& netlist, const CharLib& lib,
                       const InputModel& im, const AnalyzeOptions& opts);

//! Exact per-gate joint input-transition weights, enumerated over all
//! primary-input assignment pairs weighted by the input model. Entry
//! [gate][code] uses the same transition coding as gate_profile.
std::vector<std::array<double, 16>>
exact_joint_weights(const Netlist& netlist, const InputModel& im,
                    int max_inputs);

} // namespace vost
