#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "vost/mcdta.hpp"

using namespace vost;
using vost::test::default_lib;
using vost::test::fixture;
using vost::test::zero_sigma_lib;

namespace {

const GridConfig cfg = GridConfig::make(0.5, 400.0);

bool same_hist(const McHistogram& a, const McHistogram& b) {
  return a.transition_counts == b.transition_counts &&
         a.dist.atom_weight() == b.dist.atom_weight() &&
         (a.dist.density() == b.dist.density()).all();
}

} // namespace

TEST_CASE("degenerate spread: chain delay is exactly the sum of means") {
  const Netlist n = parse_netlist_string(R"({
    "inputs": ["a"], "outputs": ["y2"],
    "gates": [
      {"id": "n1", "type": "NOT", "in": ["a"], "out": "y1"},
      {"id": "n2", "type": "NOT", "in": ["y1"], "out": "y2"}]})");
  const CharLib lib = zero_sigma_lib();
  Rng rng(7);
  // a: 0 -> 1, so y1 falls (mu 6.0) and y2 rises (mu 6.5)
  const EventTrace tr = simulate_pair(n, lib, 0b0, 0b1, 1.0, rng);
  const auto y2 = static_cast<size_t>(n.net("y2"));
  REQUIRE(tr[y2].size() == 1);
  CHECK(tr[y2].back().t_ps == doctest::Approx(12.5).epsilon(1e-4));
}

TEST_CASE("unchanged inputs produce no events anywhere") {
  const Netlist n = parse_netlist_file(fixture("fig1_xor2.json"));
  const CharLib lib = default_lib();
  Rng rng(3);
  const EventTrace tr = simulate_pair(n, lib, 0b101, 0b101, 0.7, rng);
  for (const auto& events : tr) CHECK(events.empty());
}

TEST_CASE("late second input exposes the intermediate pulse") {
  // (Y1, C) go 11 -> 00 on the second xor; C switches at zero and Y1 arrives
  // a gate delay later, so some samples glitch and some are filtered
  const Netlist n = parse_netlist_file(fixture("fig1_xor2.json"));
  const CharLib lib = default_lib();
  const auto y2 = static_cast<size_t>(n.net("Y2"));
  // A=1,B=0 -> Y1=1; C=1 -> Y2 = 0. Then everything falls.
  const uint64_t prev = 0b101, next = 0b000;

  int glitchy = 0, quiet = 0;
  for (uint64_t s = 0; s < 400; ++s) {
    Rng rng = Rng::stream(11, s);
    const EventTrace tr = simulate_pair(n, lib, prev, next, 0.7, rng);
    if (tr[y2].empty()) {
      ++quiet;
    } else {
      REQUIRE(tr[y2].size() == 2);
      CHECK(tr[y2][0].value == 1); // rise into the intermediate state
      CHECK(tr[y2][1].value == 0); // trailing fall
      CHECK(tr[y2][0].t_ps < tr[y2][1].t_ps);
      ++glitchy;
    }
  }
  CHECK(glitchy > 50);
  CHECK(quiet > 50);
}

TEST_CASE("every net settles to its functional value") {
  const Netlist n = parse_netlist_file(fixture("adder4.json"));
  const CharLib lib = default_lib();
  for (uint64_t s = 0; s < 100; ++s) {
    Rng rng = Rng::stream(99, s);
    const uint64_t prev = rng.next() & 0x1ff, next = rng.next() & 0x1ff;
    Rng sim(s);
    const EventTrace tr = simulate_pair(n, lib, prev, next, 0.7, sim);
    const LogicState sp = evaluate_packed(n, prev);
    const LogicState sn = evaluate_packed(n, next);
    for (size_t id = 0; id < n.net_count(); ++id) {
      const int settled = tr[id].empty() ? sp[id] : tr[id].back().value;
      CHECK(settled == sn[id]);
      for (size_t e = 1; e < tr[id].size(); ++e) {
        CHECK(tr[id][e - 1].t_ps <= tr[id][e].t_ps);
        CHECK(tr[id][e - 1].value != tr[id][e].value);
      }
    }
  }
}

TEST_CASE("histograms are bit-identical across runs and thread counts") {
  const Netlist n = parse_netlist_file(fixture("fig1_xor2.json"));
  const CharLib lib = default_lib();
  McConfig mc;
  mc.n_samples = 20000;
  mc.seed = 42;
  mc.vdd = 0.7;
  mc.grid = cfg;

  const McHistogram h1 = mc_histogram(n, lib, InputModel::uniform(), mc, "Y2");
  const McHistogram h2 = mc_histogram(n, lib, InputModel::uniform(), mc, "Y2");
  CHECK(same_hist(h1, h2));

  mc.threads = 4;
  const McHistogram h4 = mc_histogram(n, lib, InputModel::uniform(), mc, "Y2");
  CHECK(same_hist(h1, h4));

  mc.threads = 3;
  const McHistogram h3 = mc_histogram(n, lib, InputModel::uniform(), mc, "Y2");
  CHECK(same_hist(h1, h3));

  mc.seed = 43;
  const McHistogram hx = mc_histogram(n, lib, InputModel::uniform(), mc, "Y2");
  CHECK(!same_hist(h1, hx));
}

TEST_CASE("empirical transition weights sit inside binomial bounds") {
  const Netlist n = parse_netlist_file(fixture("fig1_xor2.json"));
  const CharLib lib = default_lib();
  McConfig mc;
  mc.n_samples = 40000;
  mc.seed = 5;
  mc.vdd = 0.7;
  mc.grid = cfg;
  const McHistogram h = mc_histogram(n, lib, InputModel::uniform(), mc, "Y2");
  // exhaustive weights for the xor chain are exactly 1/4 each
  const double n_d = static_cast<double>(mc.n_samples);
  const double bound = 3.0 * std::sqrt(0.25 * 0.75 / n_d);
  for (int tr = 0; tr < 4; ++tr) {
    const double emp =
        static_cast<double>(h.transition_counts[static_cast<size_t>(tr)]) / n_d;
    CHECK(std::abs(emp - 0.25) < bound);
  }
}

TEST_CASE("degenerate spread: histogram collapses to one spike") {
  const Netlist n = parse_netlist_string(R"({
    "inputs": ["a"], "outputs": ["y2"],
    "gates": [
      {"id": "n1", "type": "NOT", "in": ["a"], "out": "y1"},
      {"id": "n2", "type": "NOT", "in": ["y1"], "out": "y2"}]})");
  const CharLib lib = zero_sigma_lib();
  McConfig mc;
  mc.n_samples = 2000;
  mc.seed = 8;
  mc.vdd = 1.0;
  mc.grid = cfg;
  InputModel im;
  im.pin("a", 0, 1);
  const McHistogram h = mc_histogram(n, lib, im, mc, "y2");
  CHECK(h.dist.atom_weight() == 0.0);
  // all mass within the two cells around 12.5 ps (it sits on a boundary)
  const auto cell = static_cast<Eigen::Index>(cfg.cell_of(12.5));
  const double near =
      (h.dist.density()[cell - 1] + h.dist.density()[cell]) * cfg.dt;
  CHECK(near == doctest::Approx(1.0));
  CHECK(std::abs(h.dist.mean() - 12.5) < 0.5);
}

TEST_CASE("histogram self-distance shrinks as samples grow") {
  const Netlist n = parse_netlist_file(fixture("fig1_xor2.json"));
  const CharLib lib = default_lib();
  auto run = [&](uint64_t samples, uint64_t seed) {
    McConfig mc;
    mc.n_samples = samples;
    mc.seed = seed;
    mc.vdd = 0.7;
    mc.grid = cfg;
    return mc_histogram(n, lib, InputModel::uniform(), mc, "Y2");
  };
  const McHistogram ref = run(128000, 1000);
  const double tv_small = tv_distance(run(1000, 1).dist, ref.dist);
  const double tv_large = tv_distance(run(64000, 2).dist, ref.dist);
  CHECK(tv_large < tv_small);
}

TEST_CASE("latched words at the grid edges") {
  const Netlist n = parse_netlist_file(fixture("adder4.json"));
  const CharLib lib = default_lib();
  // 15 + 1 -> 16, then everything drops to zero
  const InputModel im = InputModel::pinned(n, 0b000011111, 0b000000000);
  McConfig mc;
  mc.n_samples = 200;
  mc.seed = 21;
  mc.vdd = 0.7;
  mc.grid = cfg;

  mc.t_clk_ps = cfg.t_max();
  for (const LatchedSample& s : mc_latched_outputs(n, lib, im, mc, "sum")) {
    CHECK(s.ideal == 0);
    CHECK(s.latched == 0);
  }
  mc.t_clk_ps = 0.0;
  for (const LatchedSample& s : mc_latched_outputs(n, lib, im, mc, "sum")) {
    CHECK(s.ideal == 0);
    CHECK(s.latched == 16); // previous output word survives the edge
  }
}

TEST_CASE("sample count of zero is rejected") {
  const Netlist n = parse_netlist_file(fixture("fig1_xor2.json"));
  const CharLib lib = default_lib();
  McConfig mc;
  mc.n_samples = 0;
  mc.grid = cfg;
  CHECK_THROWS_AS(mc_histogram(n, lib, InputModel::uniform(), mc, "Y2"), Error);
}
