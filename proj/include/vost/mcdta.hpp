#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vost/charlib.hpp"
#include "vost/delay_dist.hpp"
#include "vost/input_model.hpp"
#include "vost/netlist.hpp"
#include "vost/rng.hpp"

namespace vost {

//! How a gate treats in-flight output responses when a new input event
//! arrives.
//!
//! - reevaluate: the gate always heads for the value implied by its present
//!   inputs; responses to stale input states are cancelled. A short input
//!   pulse that ends before the first response completes produces no output
//!   pulse, which is the sampled counterpart of gating the late arrival with
//!   a step at the first response's delay.
//! - transport: every input edge produces an output edge (unless it would
//!   re-assert the value the output is already heading to); later-scheduled
//!   events override pending ones beyond their own time.
enum class EventSemantics { reevaluate, transport };

struct McConfig {
  uint64_t n_samples = 1;
  uint64_t seed = 1;
  double vdd = 1.0;
  double t_clk_ps = 100.0;
  GridConfig grid{};
  EventSemantics semantics = EventSemantics::reevaluate;
  int threads = 1;
};

struct Event {
  double t_ps;
  uint8_t value;
};

//! Per-net delivered value changes, in time order.
using EventTrace = std::vector<std::vector<Event>>;

//! Event-driven simulation of one input vector pair: primary inputs switch
//! at t = 0 and each gate responds after a delay drawn fresh from its
//! characterized (previous local state -> new local state) entry. Negative
//! draws clamp to zero. Output events that would re-assert the value the
//! gate is already heading to are dropped.
EventTrace simulate_pair(const Netlist& netlist, const CharLib& lib,
                         uint64_t prev_bits, uint64_t next_bits, double vdd,
                         Rng& rng,
                         EventSemantics semantics = EventSemantics::reevaluate);

//! Value of a net at time t (events strictly before t applied) given its
//! initial value.
int trace_value_at(const std::vector<Event>& events, int initial, double t_ps);

struct McHistogram {
  DelayDist dist;                           // settling-time histogram
  std::array<uint64_t, 4> transition_counts{}; // by (initial, final) values
  uint64_t n_samples = 0;
};

//! Empirical settling-time distribution of one output net under the input
//! model: per sample, the last event time on the net (the atom at zero when
//! it never moves), binned on the shared grid. Deterministic for a given
//! seed regardless of thread count.
McHistogram mc_histogram(const Netlist& netlist, const CharLib& lib,
                         const InputModel& im, const McConfig& mc,
                         const std::string& output);

struct LatchedSample {
  int64_t ideal;
  int64_t latched;
};

//! Per sample, the declared word's ideal value (settled logic) and the value
//! captured at the clock edge, where each bit holds whatever it was just
//! before t_clk.
std::vector<LatchedSample>
mc_latched_outputs(const Netlist& netlist, const CharLib& lib,
                   const InputModel& im, const McConfig& mc,
                   const std::string& word);

} // namespace vost
