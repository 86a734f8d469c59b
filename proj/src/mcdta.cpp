#include "vost/mcdta.hpp"

#include <algorithm>
#include <queue>
#include <thread>

namespace vost {

namespace {

struct QueueEntry {
  double t;
  uint64_t seq;
  size_t gate;
  bool operator>(const QueueEntry& o) const {
    return t != o.t ? t > o.t : seq > o.seq;
  }
};

struct PendingEvent {
  double t;
  uint64_t seq;
  uint8_t value;
};

//! Reusable event-driven simulator: the topology is built once, per-run
//! state is reset in place. Per-gate pending-event lists are authoritative;
//! queue entries are delivery hints, so cancelling an event is just removing
//! it from the list.
class Simulation {
public:
  Simulation(const Netlist& nl, const CharLib& lib, double vdd,
             EventSemantics sem)
      : nl_(nl), lib_(lib), vdd_(vdd), sem_(sem), value_(nl.net_count(), 0),
        before_(nl.net_count(), 0), trace_(nl.net_count()),
        pending_(nl.gates().size()) {
    consumers_.resize(nl.net_count());
    for (size_t g = 0; g < nl.gates().size(); ++g)
      for (NetId in : nl.gates()[g].inputs)
        consumers_[static_cast<size_t>(in)].push_back(g);
  }

  const EventTrace& run(uint64_t prev_bits, uint64_t next_bits, Rng& rng) {
    rng_ = &rng;
    seq_ = 0;
    for (auto& tr : trace_) tr.clear();
    for (auto& p : pending_) p.clear();
    while (!queue_.empty()) queue_.pop();

    const LogicState prev_state = evaluate_packed(nl_, prev_bits);
    value_ = prev_state;
    before_ = prev_state;

    std::vector<size_t>& touched = touched_;
    touched.clear();
    const auto& pis = nl_.primary_inputs();
    for (size_t i = 0; i < pis.size(); ++i) {
      const auto next_bit = static_cast<uint8_t>((next_bits >> i) & 1u);
      const auto id = static_cast<size_t>(pis[i]);
      if (value_[id] != next_bit) {
        value_[id] = next_bit;
        trace_[id].push_back({0.0, next_bit});
        for (size_t g : consumers_[id]) touched.push_back(g);
      }
    }
    react(0.0, touched);

    while (!queue_.empty()) {
      const double t = queue_.top().t;
      touched.clear();
      while (!queue_.empty() && queue_.top().t == t) {
        const QueueEntry e = queue_.top();
        queue_.pop();
        auto& pend = pending_[e.gate];
        auto it = std::find_if(
            pend.begin(), pend.end(),
            [&](const PendingEvent& p) { return p.seq == e.seq; });
        if (it == pend.end()) continue; // cancelled
        const uint8_t v = it->value;
        pend.erase(it);
        const auto id = static_cast<size_t>(nl_.gates()[e.gate].output);
        if (value_[id] == v) continue;
        value_[id] = v;
        trace_[id].push_back({t, v});
        for (size_t g : consumers_[id]) touched.push_back(g);
      }
      react(t, touched);
    }
    return trace_;
  }

private:
  void react(double t, std::vector<size_t>& touched) {
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (size_t g : touched) evaluate_gate(g, t);
    // close the batch: "before" values catch up with delivered ones
    for (size_t g : touched)
      for (NetId in : nl_.gates()[g].inputs)
        before_[static_cast<size_t>(in)] = value_[static_cast<size_t>(in)];
  }

  void evaluate_gate(size_t g, double t) {
    const Gate& gate = nl_.gates()[g];
    unsigned before = 0, after = 0;
    for (NetId in : gate.inputs) {
      before = (before << 1) | before_[static_cast<size_t>(in)];
      after = (after << 1) | value_[static_cast<size_t>(in)];
    }
    if (before == after) return;

    const auto out_id = static_cast<size_t>(gate.output);
    const uint8_t now = value_[out_id];
    auto& pend = pending_[g];
    const uint8_t heading = pend.empty() ? now : pend.back().value;
    const auto target = static_cast<uint8_t>(eval_gate(gate.kind, after));

    if (target == heading) return; // re-assertion: first response stands

    if (sem_ == EventSemantics::reevaluate && target == now) {
      // present inputs already agree with the settled output; in-flight
      // responses to stale states die
      pend.clear();
      return;
    }

    const CharEntry e =
        lib_.lookup(gate.kind, TransitionPair{static_cast<uint8_t>(before),
                                              static_cast<uint8_t>(after)},
                    vdd_);
    const double d = std::max(0.0, e.mu_ps + e.sigma_ps * rng_->normal());
    const double et = t + d;
    // a response to newer inputs overrides anything scheduled at or after it
    pend.erase(std::remove_if(pend.begin(), pend.end(),
                              [&](const PendingEvent& p) { return p.t >= et; }),
               pend.end());
    const uint8_t base = pend.empty() ? now : pend.back().value;
    if (base == target) return;
    pend.push_back({et, seq_, target});
    queue_.push({et, seq_, g});
    ++seq_;
  }

  const Netlist& nl_;
  const CharLib& lib_;
  double vdd_;
  EventSemantics sem_;
  Rng* rng_ = nullptr;
  LogicState value_;
  LogicState before_; // values as of the last batch each gate reacted to
  EventTrace trace_;
  std::vector<std::vector<PendingEvent>> pending_;
  std::vector<std::vector<size_t>> consumers_;
  std::vector<size_t> touched_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue_;
  uint64_t seq_ = 0;
};

//! Draw a (prev, next) transition index from per-input probabilities.
int sample_transition(const std::array<double, 4>& probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (int tr = 0; tr < 4; ++tr) {
    acc += probs[static_cast<size_t>(tr)];
    if (u < acc) return tr;
  }
  return 3;
}

struct SampledPair {
  uint64_t prev_bits;
  uint64_t next_bits;
};

SampledPair sample_pair(const std::vector<std::array<double, 4>>& probs,
                        Rng& rng) {
  SampledPair s{0, 0};
  for (size_t i = 0; i < probs.size(); ++i) {
    const int tr = sample_transition(probs[i], rng);
    s.prev_bits |= static_cast<uint64_t>(tr_prev(tr)) << i;
    s.next_bits |= static_cast<uint64_t>(tr_next(tr)) << i;
  }
  return s;
}

std::vector<std::array<double, 4>> input_probs(const Netlist& nl,
                                               const InputModel& im) {
  std::vector<std::array<double, 4>> probs;
  for (NetId pi : nl.primary_inputs()) probs.push_back(im.probs(nl.net_name(pi)));
  return probs;
}

//! Run body(worker, sample) over all samples, partitioned contiguously.
template <typename PerSample>
void run_samples(uint64_t n_samples, int threads, PerSample&& body) {
  const int nt = std::max(1, threads);
  if (nt == 1 || n_samples < 2) {
    for (uint64_t s = 0; s < n_samples; ++s) body(0, s);
    return;
  }
  const uint64_t chunk =
      (n_samples + static_cast<uint64_t>(nt) - 1) / static_cast<uint64_t>(nt);
  std::vector<std::thread> pool;
  for (int w = 0; w < nt; ++w) {
    const uint64_t lo = static_cast<uint64_t>(w) * chunk;
    const uint64_t hi = std::min(n_samples, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([w, lo, hi, &body] {
      for (uint64_t s = lo; s < hi; ++s) body(w, s);
    });
  }
  for (auto& th : pool) th.join();
}

} // namespace

EventTrace simulate_pair(const Netlist& netlist, const CharLib& lib,
                         uint64_t prev_bits, uint64_t next_bits, double vdd,
                         Rng& rng, EventSemantics semantics) {
  Simulation sim(netlist, lib, vdd, semantics);
  return sim.run(prev_bits, next_bits, rng);
}

int trace_value_at(const std::vector<Event>& events, int initial, double t_ps) {
  int v = initial;
  for (const Event& e : events) {
    if (e.t_ps >= t_ps) break;
    v = e.value;
  }
  return v;
}

McHistogram mc_histogram(const Netlist& netlist, const CharLib& lib,
                         const InputModel& im, const McConfig& mc,
                         const std::string& output) {
  if (mc.n_samples < 1) throw usage_error("mc: n_samples must be >= 1");
  const auto out_id = static_cast<size_t>(netlist.net(output));
  const auto cells = static_cast<size_t>(mc.grid.cells);
  const auto probs = input_probs(netlist, im);

  struct Block {
    std::vector<uint64_t> cell_counts;
    uint64_t atom_count = 0;
    std::array<uint64_t, 4> tr_counts{};
  };
  const int nt = std::max(1, mc.threads);
  std::vector<Block> blocks(static_cast<size_t>(nt));
  for (auto& b : blocks) b.cell_counts.assign(cells, 0);
  std::vector<Simulation> sims;
  sims.reserve(static_cast<size_t>(nt));
  for (int w = 0; w < nt; ++w)
    sims.emplace_back(netlist, lib, mc.vdd, mc.semantics);

  run_samples(mc.n_samples, mc.threads, [&](int worker, uint64_t s) {
    Block& blk = blocks[static_cast<size_t>(worker)];
    Rng rng = Rng::stream(mc.seed, s);
    const SampledPair pair = sample_pair(probs, rng);
    const LogicState prev_state = evaluate_packed(netlist, pair.prev_bits);
    const LogicState next_state = evaluate_packed(netlist, pair.next_bits);
    ++blk.tr_counts[static_cast<size_t>(
        tr_index(prev_state[out_id], next_state[out_id]))];
    Rng sim_rng = Rng::stream(mc.seed ^ 0x5bf03635ULL, s);
    const EventTrace& trace =
        sims[static_cast<size_t>(worker)].run(pair.prev_bits, pair.next_bits,
                                              sim_rng);
    if (trace[out_id].empty())
      ++blk.atom_count;
    else
      ++blk.cell_counts[static_cast<size_t>(
          mc.grid.cell_of(trace[out_id].back().t_ps))];
  });

  Block total;
  total.cell_counts.assign(cells, 0);
  for (const Block& b : blocks) {
    total.atom_count += b.atom_count;
    for (size_t tr = 0; tr < 4; ++tr) total.tr_counts[tr] += b.tr_counts[tr];
    for (size_t k = 0; k < cells; ++k) total.cell_counts[k] += b.cell_counts[k];
  }

  const auto n = static_cast<double>(mc.n_samples);
  Eigen::ArrayXd density(static_cast<Eigen::Index>(cells));
  for (size_t k = 0; k < cells; ++k)
    density[static_cast<Eigen::Index>(k)] =
        static_cast<double>(total.cell_counts[k]) / (n * mc.grid.dt);
  return McHistogram{DelayDist(mc.grid,
                               static_cast<double>(total.atom_count) / n,
                               std::move(density)),
                     total.tr_counts, mc.n_samples};
}

std::vector<LatchedSample>
mc_latched_outputs(const Netlist& netlist, const CharLib& lib,
                   const InputModel& im, const McConfig& mc,
                   const std::string& word) {
  if (mc.n_samples < 1) throw usage_error("mc: n_samples must be >= 1");
  const WordDef& w = netlist.word(word);
  const auto probs = input_probs(netlist, im);
  std::vector<LatchedSample> out(mc.n_samples);

  const int nt = std::max(1, mc.threads);
  std::vector<Simulation> sims;
  sims.reserve(static_cast<size_t>(nt));
  for (int i = 0; i < nt; ++i)
    sims.emplace_back(netlist, lib, mc.vdd, mc.semantics);

  run_samples(mc.n_samples, mc.threads, [&](int worker, uint64_t s) {
    Rng rng = Rng::stream(mc.seed, s);
    const SampledPair pair = sample_pair(probs, rng);
    const LogicState prev_state = evaluate_packed(netlist, pair.prev_bits);
    const LogicState next_state = evaluate_packed(netlist, pair.next_bits);
    Rng sim_rng = Rng::stream(mc.seed ^ 0x5bf03635ULL, s);
    const EventTrace& trace =
        sims[static_cast<size_t>(worker)].run(pair.prev_bits, pair.next_bits,
                                              sim_rng);
    LogicState latched = prev_state;
    for (NetId b : w.bits) {
      const auto id = static_cast<size_t>(b);
      latched[id] = static_cast<uint8_t>(
          trace_value_at(trace[id], prev_state[id], mc.t_clk_ps));
    }
    out[s] = LatchedSample{word_value(w, next_state), word_value(w, latched)};
  });
  return out;
}

} // namespace vost
