#include "vost/ssta.hpp"

#include <cmath>

namespace vost {

namespace {

constexpr double kWeightFloor = 1e-15;

//! Continuous part of a distribution scaled to unit mass.
DelayDist continuous_part(const DelayDist& d) {
  const double m = d.density().sum() * d.grid().dt;
  if (m <= kWeightFloor) return DelayDist(d.grid());
  return DelayDist(d.grid(), 0.0, d.density() / m);
}

//! Cell-center CDF of a distribution (midpoint convention inside a cell).
Eigen::ArrayXd cell_cdf(const DelayDist& d) {
  const auto& den = d.density();
  const double dt = d.grid().dt;
  Eigen::ArrayXd cdf(den.size());
  double below = d.atom_weight();
  for (Eigen::Index k = 0; k < den.size(); ++k) {
    cdf[k] = below + 0.5 * den[k] * dt;
    below += den[k] * dt;
  }
  return cdf;
}

//! Defective distribution of `d` on the event {d > ref}: the density is
//! weighted cell-wise by P(ref < t). Mass equals P(d > ref) under
//! independence.
DelayDist condition_after(const DelayDist& d, const DelayDist& ref) {
  return DelayDist(d.grid(), 0.0, d.density() * cell_cdf(ref));
}

//! Defective distribution of `d` on the event {d <= ref}.
DelayDist condition_before(const DelayDist& d, const DelayDist& ref) {
  return DelayDist(d.grid(), d.atom_weight(),
                   d.density() * (1.0 - cell_cdf(ref)));
}

struct Accumulator {
  explicit Accumulator(const GridConfig& cfg)
      : acc{DelayDist(cfg), DelayDist(cfg), DelayDist(cfg), DelayDist(cfg)} {}
  std::vector<DelayDist> acc;
  void add(int bucket, double w, const DelayDist& d) {
    if (w > kWeightFloor) acc[static_cast<size_t>(bucket)].accumulate(w, d);
  }
  void add_delta(int bucket, double w) {
    if (w > kWeightFloor) {
      DelayDist d = delta(acc[static_cast<size_t>(bucket)].grid());
      acc[static_cast<size_t>(bucket)].accumulate(w, d);
    }
  }
};

} // namespace

NetProfile NetProfile::quiescent(const GridConfig& cfg,
                                 const std::array<double, 4>& probs) {
  NetProfile p;
  p.alpha = probs;
  p.logical_alpha = probs;
  p.dist.assign(4, delta(cfg));
  return p;
}

const DelayDist& GaussianCache::get(GateKind kind, TransitionPair tr) {
  const unsigned key =
      (static_cast<unsigned>(kind) << 8) | tr.code(arity(kind));
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const CharEntry e = lib_->lookup(kind, tr, vdd_);
  return cache_.emplace(key, gaussian(e.mu_ps, e.sigma_ps, cfg_)).first->second;
}

namespace {

//! Blending (operative) and endpoint (logical) weights per joint input
//! transition code. The logical joint — either the product of per-input
//! logical weights or the exactly enumerated one — is redistributed through
//! each input's glitch-relabel fractions, so a logically quiet input with
//! pulse mass contributes trailing-edge terms downstream. `from_quiet`
//! tracks, per operative code, how much weight originates from logically
//! unchanged outputs ([0]: 0->0, [1]: 1->1); anything of that origin booked
//! under a trailing edge is this gate's own moved mass.
struct JointWeights {
  std::array<double, 16> op{};
  std::array<double, 16> log{};
  std::array<std::array<double, 16>, 2> from_quiet{};
};

JointWeights joint_weights_for(GateKind kind,
                               const std::vector<const NetProfile*>& inputs,
                               const double* logical_joint) {
  const int n = arity(kind);
  const unsigned states = 1u << n;
  JointWeights w;

  for (unsigned lp = 0; lp < states; ++lp) {
    for (unsigned ln = 0; ln < states; ++ln) {
      double wl;
      if (logical_joint) {
        wl = logical_joint[(lp << n) | ln];
      } else {
        wl = 1.0;
        for (int k = 0; k < n; ++k) {
          const int shift = n - 1 - k;
          wl *= inputs[static_cast<size_t>(k)]->logical_alpha[static_cast<size_t>(
              tr_index(static_cast<int>((lp >> shift) & 1u),
                       static_cast<int>((ln >> shift) & 1u)))];
        }
      }
      w.log[(lp << n) | ln] = wl;
      if (wl <= kWeightFloor) continue;

      const int lclass = tr_index(eval_gate(kind, lp), eval_gate(kind, ln));
      const int quiet_idx =
          lclass == tr_index(0, 0) ? 0 : (lclass == tr_index(1, 1) ? 1 : -1);

      // options per input: keep the logical label, or relabel a quiet input
      // onto the trailing edge of its pulse
      struct Option {
        unsigned prev;
        double pr;
      };
      std::array<std::array<Option, 2>, 2> opts;
      std::array<int, 2> n_opts{};
      for (int k = 0; k < n; ++k) {
        const int shift = n - 1 - k;
        const unsigned pb = (lp >> shift) & 1u;
        const unsigned nb = (ln >> shift) & 1u;
        double moved = 0.0;
        if (pb == nb) {
          const NetProfile& in = *inputs[static_cast<size_t>(k)];
          const double cls = in.logical_alpha[static_cast<size_t>(
              tr_index(static_cast<int>(pb), static_cast<int>(nb)))];
          if (cls > kWeightFloor)
            moved = std::min(1.0, in.glitch_moved[pb == 0 ? 0 : 1] / cls);
        }
        auto& o = opts[static_cast<size_t>(k)];
        o[0] = {pb, 1.0 - moved};
        n_opts[static_cast<size_t>(k)] = 1;
        if (moved > kWeightFloor) {
          o[1] = {1u - pb, moved};
          n_opts[static_cast<size_t>(k)] = 2;
        }
      }
      for (int i = 0; i < n_opts[0]; ++i) {
        for (int j = 0; j < (n == 2 ? n_opts[1] : 1); ++j) {
          unsigned op = opts[0][static_cast<size_t>(i)].prev;
          double pr = opts[0][static_cast<size_t>(i)].pr;
          if (n == 2) {
            op = (op << 1) | opts[1][static_cast<size_t>(j)].prev;
            pr *= opts[1][static_cast<size_t>(j)].pr;
          }
          const unsigned code = (op << n) | ln;
          w.op[code] += wl * pr;
          if (quiet_idx >= 0)
            w.from_quiet[static_cast<size_t>(quiet_idx)][code] += wl * pr;
        }
      }
    }
  }
  return w;
}

} // namespace

NetProfile gate_profile(GaussianCache& gauss, GateKind kind,
                        const std::vector<const NetProfile*>& inputs,
                        const double* joint_weights) {
  const int n = arity(kind);
  if (static_cast<int>(inputs.size()) != n)
    throw numeric_error("gate_profile: wrong number of input profiles");
  const GridConfig& cfg = gauss.grid();

  NetProfile out;
  out.dist.reserve(4);
  Accumulator acc(cfg);

  const unsigned states = 1u << n;
  const JointWeights weights = joint_weights_for(kind, inputs, joint_weights);
  for (unsigned code = 0; code < states * states; ++code) {
    const double wl = weights.log[code];
    if (wl > kWeightFloor) {
      const unsigned lp = code >> n, ln = code & (states - 1u);
      out.logical_alpha[static_cast<size_t>(
          tr_index(eval_gate(kind, lp), eval_gate(kind, ln)))] += wl;
    }
  }

  for (unsigned prev = 0; prev < states; ++prev) {
    for (unsigned next = 0; next < states; ++next) {
      const TransitionPair tau{static_cast<uint8_t>(prev),
                               static_cast<uint8_t>(next)};
      // marginal transition of input k (bit n-1-k of the packed state)
      auto input_tr = [&](int k) {
        const int shift = n - 1 - k;
        return tr_index(static_cast<int>((prev >> shift) & 1u),
                        static_cast<int>((next >> shift) & 1u));
      };
      const double w = weights.op[tau.code(n)];
      if (w <= kWeightFloor) continue;

      const int out_prev = eval_gate(kind, prev);
      const int out_next = eval_gate(kind, next);
      const int lb = tr_index(out_prev, out_next);

      // share of this code's weight whose output is logically unchanged;
      // whatever lands on a trailing edge below is re-assigned pulse mass
      const double frac0 = weights.from_quiet[0][tau.code(n)] / w;
      const double frac1 = weights.from_quiet[1][tau.code(n)] / w;
      auto book = [&](int bucket, double weight, const DelayDist& d) {
        acc.add(bucket, weight, d);
        const double m = weight * d.mass();
        if (bucket == tr_index(1, 0)) out.glitch_moved[0] += frac0 * m;
        else if (bucket == tr_index(0, 1)) out.glitch_moved[1] += frac1 * m;
      };

      int changing[2];
      int n_changing = 0;
      for (int k = 0; k < n; ++k)
        if (((prev ^ next) >> (n - 1 - k)) & 1u) changing[n_changing++] = k;

      if (n_changing == 0) {
        acc.add_delta(lb, w);
        continue;
      }
      if (n_changing == 1) {
        if (out_prev == out_next) {
          // a lone input event cannot expose an intermediate state
          acc.add_delta(lb, w);
        } else {
          const auto& arrival =
              inputs[static_cast<size_t>(changing[0])]
                  ->dist[static_cast<size_t>(input_tr(changing[0]))];
          book(lb, w, convolve(arrival, gauss.get(kind, tau)));
        }
        continue;
      }

      // Two changing inputs: decompose into a simultaneous branch (both
      // arrivals are atoms at zero) and ordered branches. A zero-time first
      // arrival uses the hard step at the first-step response mean; when
      // both arrivals are distributed, the ordering condition is applied as
      // a cell-wise CDF weighting ({late > first + step1 response} for
      // glitch exposure, {first < late} / {late > first} for the settling
      // branches), which reduces to the same step in the degenerate case.
      const auto& dist_a =
          inputs[static_cast<size_t>(changing[0])]
              ->dist[static_cast<size_t>(input_tr(changing[0]))];
      const auto& dist_b =
          inputs[static_cast<size_t>(changing[1])]
              ->dist[static_cast<size_t>(input_tr(changing[1]))];
      const double atom_a = dist_a.atom_weight();
      const double atom_b = dist_b.atom_weight();

      const double w_sim = atom_a * atom_b;
      if (w_sim > kWeightFloor) {
        if (out_prev == out_next)
          acc.add_delta(lb, w * w_sim);
        else
          book(lb, w * w_sim, gauss.get(kind, tau));
      }

      const DelayDist cont[2] = {continuous_part(dist_a),
                                 continuous_part(dist_b)};
      const double atom[2] = {atom_a, atom_b};

      struct Branch {
        int bucket;
        double weight; // defective branch probability within this transition
        DelayDist dist; // unit mass
      };
      std::vector<Branch> branches;
      const double w_ordered = 1.0 - w_sim;
      double quiet = w_ordered; // glitch-family complement accumulator
      bool glitch_family = false;

      for (int ordering = 0; ordering < 2; ++ordering) {
        const int f = ordering, s = 1 - ordering;
        const unsigned mid = prev ^ (1u << (n - 1 - changing[f]));
        const int out_mid = eval_gate(kind, mid);
        const TransitionPair step1{static_cast<uint8_t>(prev),
                                   static_cast<uint8_t>(mid)};
        const TransitionPair step2{static_cast<uint8_t>(mid),
                                   static_cast<uint8_t>(next)};
        // first arrival at zero (its atom) vs somewhere in its density
        const double w_atom_first = atom[f] * (1.0 - atom[s]);
        const double w_cont_first = (1.0 - atom[f]) * (1.0 - atom[s]);

        if (out_prev == out_next) {
          glitch_family = true;
          if (out_mid == out_prev) continue; // output never moves this way
          for (int sub = 0; sub < 2; ++sub) {
            const double ws = sub == 0 ? w_atom_first : w_cont_first;
            if (ws <= kWeightFloor) continue;
            // the intermediate state appears only if the late arrival lands
            // beyond the first-step response: a step at its mean when the
            // first input switches at zero, the smooth counterpart when the
            // first arrival is itself distributed
            const DelayDist gated =
                sub == 0 ? truncate_below(cont[s],
                                          gauss.entry(kind, step1).mu_ps)
                         : condition_after(
                               cont[s],
                               convolve(cont[f], gauss.get(kind, step1)));
            const double q = gated.mass();
            if (q <= kWeightFloor) continue;
            DelayDist d = convolve(gated, gauss.get(kind, step2));
            d.scale(1.0 / d.mass());
            branches.push_back({tr_index(out_mid, out_next), ws * q,
                                std::move(d)});
            quiet -= ws * q;
          }
        } else if (out_mid == out_next) {
          // output settles on the first event
          if (w_atom_first > kWeightFloor)
            branches.push_back({lb, w_atom_first, gauss.get(kind, step1)});
          if (w_cont_first > kWeightFloor) {
            const DelayDist early = condition_before(cont[f], cont[s]);
            const double q = early.mass();
            if (q > kWeightFloor) {
              DelayDist d = convolve(early, gauss.get(kind, step1));
              d.scale(1.0 / d.mass());
              branches.push_back({lb, w_cont_first * q, std::move(d)});
            }
          }
        } else {
          // output settles on the second event
          if (w_atom_first > kWeightFloor)
            branches.push_back(
                {lb, w_atom_first, convolve(cont[s], gauss.get(kind, step2))});
          if (w_cont_first > kWeightFloor) {
            const DelayDist late = condition_after(cont[s], cont[f]);
            const double q = late.mass();
            if (q > kWeightFloor) {
              DelayDist d = convolve(late, gauss.get(kind, step2));
              d.scale(1.0 / d.mass());
              branches.push_back({lb, w_cont_first * q, std::move(d)});
            }
          }
        }
      }

      if (glitch_family) {
        // truncated branches plus the quiet complement account for the
        // whole ordered probability
        if (quiet < 0.0) {
          const double scale = w_ordered / (w_ordered - quiet);
          for (Branch& b : branches) b.weight *= scale;
          quiet = 0.0;
        }
        acc.add_delta(lb, w * quiet);
        for (const Branch& b : branches) book(b.bucket, w * b.weight, b.dist);
      } else if (!branches.empty()) {
        // defective step-conditioned branches renormalized to the ordered
        // probability
        double total = 0.0;
        for (const Branch& b : branches) total += b.weight;
        const double scale = w_ordered / total;
        for (const Branch& b : branches)
          book(b.bucket, w * b.weight * scale, b.dist);
      }
    }
  }

  for (int b = 0; b < 4; ++b) {
    DelayDist& d = acc.acc[static_cast<size_t>(b)];
    const double m = d.mass();
    out.alpha[static_cast<size_t>(b)] = m;
    if (m > kWeightFloor) {
      d.scale(1.0 / m);
      out.dist.push_back(std::move(d));
    } else {
      out.alpha[static_cast<size_t>(b)] = 0.0;
      out.dist.push_back(delta(cfg));
    }
  }
  return out;
}

std::vector<std::array<double, 16>>
exact_joint_weights(const Netlist& netlist, const InputModel& im,
                    int max_inputs) {
  const size_t k = netlist.primary_inputs().size();
  if (static_cast<int>(k) > max_inputs)
    throw numeric_error("exact joint weights need <= " +
                        std::to_string(max_inputs) + " primary inputs, got " +
                        std::to_string(k));
  const uint64_t states = uint64_t{1} << k;
  const size_t n_gates = netlist.gates().size();

  // packed gate-input bits per assignment
  std::vector<std::vector<uint8_t>> packed(states,
                                           std::vector<uint8_t>(n_gates));
  for (uint64_t s = 0; s < states; ++s) {
    const LogicState st = evaluate_packed(netlist, s);
    for (size_t g = 0; g < n_gates; ++g) {
      unsigned p = 0;
      for (NetId in : netlist.gates()[g].inputs)
        p = (p << 1) | st[static_cast<size_t>(in)];
      packed[s][g] = static_cast<uint8_t>(p);
    }
  }

  // per-assignment-pair weight factors from the input model
  std::vector<std::array<double, 4>> input_probs;
  for (NetId pi : netlist.primary_inputs())
    input_probs.push_back(im.probs(netlist.net_name(pi)));

  std::vector<std::array<double, 16>> joint(n_gates, std::array<double, 16>{});
  for (uint64_t prev = 0; prev < states; ++prev) {
    for (uint64_t next = 0; next < states; ++next) {
      double w = 1.0;
      for (size_t i = 0; i < k && w > 0.0; ++i)
        w *= input_probs[i][static_cast<size_t>(
            tr_index(static_cast<int>((prev >> i) & 1u),
                     static_cast<int>((next >> i) & 1u)))];
      if (w <= 0.0) continue;
      for (size_t g = 0; g < n_gates; ++g) {
        const int ng = arity(netlist.gates()[g].kind);
        const unsigned code =
            (static_cast<unsigned>(packed[prev][g]) << ng) | packed[next][g];
        joint[g][code] += w;
      }
    }
  }
  return joint;
}

const NetProfile& AnalysisResult::profile(const std::string& net) const {
  return profiles_[static_cast<size_t>(this->net(net))];
}

NetId AnalysisResult::net(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw usage_error("unknown net '" + name + "'");
  return it->second;
}

const WordDef& AnalysisResult::word(const std::string& name) const {
  for (const auto& w : words_)
    if (w.name == name) return w;
  throw usage_error("unknown word '" + name + "'");
}

DelayDist AnalysisResult::total_dist(NetId id) const {
  const NetProfile& p = profile(id);
  DelayDist total(grid_);
  for (int tr = 0; tr < 4; ++tr)
    total.accumulate(p.alpha[static_cast<size_t>(tr)],
                     p.dist[static_cast<size_t>(tr)]);
  return total;
}

DelayDist AnalysisResult::total_dist(const std::string& net) const {
  return total_dist(this->net(net));
}

std::array<double, 4>
AnalysisResult::violation_prob(const std::string& net, double t_clk_ps) const {
  if (t_clk_ps < 0.0 || t_clk_ps > grid_.t_max())
    throw numeric_error("violation_prob: t_clk outside [0, t_max]");
  const NetProfile& p = profile(net);
  std::array<double, 4> out{};
  for (int tr : {tr_index(0, 1), tr_index(1, 0)})
    out[static_cast<size_t>(tr)] =
        p.alpha[static_cast<size_t>(tr)] > 0.0
            ? exceed_prob(p.dist[static_cast<size_t>(tr)], t_clk_ps)
            : 0.0;
  return out;
}

AnalysisResult analyze(const Netlist& netlist, const CharLib& lib,
                       const InputModel& im, const AnalyzeOptions& opts) {
  AnalysisResult res;
  res.grid_ = opts.grid;
  res.vdd_ = opts.vdd;
  res.net_names_ = netlist.net_names();
  res.outputs_ = netlist.primary_outputs();
  res.words_ = netlist.words();
  for (NetId i = 0; i < static_cast<NetId>(res.net_names_.size()); ++i)
    res.index_[res.net_names_[static_cast<size_t>(i)]] = i;

  CorrMode corr = opts.corr;
  if (corr == CorrMode::automatic)
    corr = static_cast<int>(netlist.primary_inputs().size()) <=
                   opts.max_exact_inputs
               ? CorrMode::exact_joint
               : CorrMode::independent;
  res.corr_ = corr;

  std::vector<std::array<double, 16>> joint;
  if (corr == CorrMode::exact_joint)
    joint = exact_joint_weights(netlist, im, opts.max_exact_inputs);

  GaussianCache gauss(lib, opts.vdd, opts.grid);

  std::vector<NetProfile> profiles(netlist.net_count());
  for (NetId pi : netlist.primary_inputs())
    profiles[static_cast<size_t>(pi)] =
        NetProfile::quiescent(opts.grid, im.probs(netlist.net_name(pi)));

  for (size_t g : netlist.topo_order()) {
    const Gate& gate = netlist.gates()[g];
    std::vector<const NetProfile*> ins;
    for (NetId in : gate.inputs)
      ins.push_back(&profiles[static_cast<size_t>(in)]);
    profiles[static_cast<size_t>(gate.output)] = gate_profile(
        gauss, gate.kind, ins,
        corr == CorrMode::exact_joint ? joint[g].data() : nullptr);
  }
  res.profiles_ = std::move(profiles);
  return res;
}

} // namespace vost
