#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "vost/charlib.hpp"

using namespace vost;

namespace {

std::string fixture(const std::string& name) {
  return std::string(VOST_FIXTURE_DIR) + "/" + name;
}

const TransitionPair kXorRise{0b00, 0b01}; // in1 rises, output 0->1

} // namespace

TEST_CASE("nominal table loads complete and round-trips exactly") {
  const CharLib lib = load_charlib_file(fixture("charlib_nominal_1v.csv"));
  REQUIRE(lib.voltages() == std::vector<double>{1.0});
  CHECK(lib.lookup(GateKind::XOR2, kXorRise, 1.0).mu_ps == 13.6);

  std::ostringstream out;
  save_charlib(lib, out);
  std::istringstream in(out.str());
  const CharLib again = load_charlib(in);
  for (GateKind kind : {GateKind::NOT, GateKind::AND2, GateKind::OR2,
                        GateKind::NAND2, GateKind::NOR2, GateKind::XOR2,
                        GateKind::XNOR2}) {
    for (unsigned code = 0; code < transition_count(kind); ++code) {
      const TransitionPair tr = transition_from_code(code, arity(kind));
      if (!lib.has(kind, tr, 1.0)) continue;
      CHECK(again.lookup(kind, tr, 1.0) == lib.lookup(kind, tr, 1.0));
    }
  }
}

TEST_CASE("two-voltage file loads and interpolates linearly") {
  std::istringstream in(
      "gate,prev,next,vdd,mu_ps,sigma_ps\n"
      "NOT,1,0,1.00,40,4\n"
      "NOT,0,1,1.00,42,4.2\n"
      "NOT,1,0,0.70,80,8\n"
      "NOT,0,1,0.70,84,8.4\n");
  const CharLib lib = load_charlib(in);
  REQUIRE(lib.voltages().size() == 2);
  const TransitionPair fall{1, 0};
  // exact at grid points
  CHECK(lib.lookup(GateKind::NOT, fall, 1.0).mu_ps == 40.0);
  CHECK(lib.lookup(GateKind::NOT, fall, 0.7).mu_ps == 80.0);
  // halfway: mu halfway between 40 and 80
  CHECK(lib.lookup(GateKind::NOT, fall, 0.85).mu_ps ==
        doctest::Approx(60.0).epsilon(1e-12));
  // continuity near a grid point
  CHECK(lib.lookup(GateKind::NOT, fall, 0.7 + 1e-9).mu_ps ==
        doctest::Approx(80.0).epsilon(1e-6));
  CHECK_THROWS_AS(lib.lookup(GateKind::NOT, fall, 0.5), Error);
  CHECK_THROWS_AS(lib.lookup(GateKind::NOT, fall, 1.1), Error);
}

TEST_CASE("missing entry is reported by name") {
  // NOT with only one of its two output-changing transitions
  std::istringstream in(
      "gate,prev,next,vdd,mu_ps,sigma_ps\n"
      "NOT,1,0,0.70,80,8\n");
  try {
    load_charlib(in);
    FAIL("expected incomplete-library error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::incomplete_library);
    CHECK(std::string(e.what()).find("NOT 0->1 @ 0.7 V") != std::string::npos);
  }
}

TEST_CASE("sigma of zero is a parse error with its line number") {
  std::istringstream in(
      "gate,prev,next,vdd,mu_ps,sigma_ps\n"
      "NOT,1,0,1.00,40,0\n");
  try {
    load_charlib(in);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("malformed rows fail with parse errors") {
  std::istringstream bad_header("gate,prev,next\nNOT,1,0,1,40,4\n");
  CHECK_THROWS_AS(load_charlib(bad_header), Error);
  std::istringstream bad_bits(
      "gate,prev,next,vdd,mu_ps,sigma_ps\nXOR2,2x,00,1,40,4\n");
  CHECK_THROWS_AS(load_charlib(bad_bits), Error);
  std::istringstream bad_gate(
      "gate,prev,next,vdd,mu_ps,sigma_ps\nAND3,00,11,1,40,4\n");
  CHECK_THROWS_AS(load_charlib(bad_gate), Error);
}

TEST_CASE("voltage scale law: frozen value and limits") {
  // independent evaluation of the stated law via logs
  const double expected =
      std::exp(std::log(0.7) + 1.3 * (std::log(0.7) - std::log(0.4)));
  CHECK(voltage_scale_factor(0.7, 0.3, 1.3) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(1.44895).epsilon(1e-4));
  CHECK(voltage_scale_factor(1.0, 0.3, 1.3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(voltage_scale_factor(0.3, 0.3, 1.3), Error);
  CHECK_THROWS_AS(voltage_scale_factor(0.2, 0.3, 1.3), Error);
}

TEST_CASE("synthetic library scales the nominal one") {
  const CharLib nominal = load_charlib_file(fixture("charlib_nominal_1v.csv"));
  const CharLib lib = synth_charlib(nominal, {1.0, 0.9, 0.8, 0.7});
  CHECK(lib.voltages().size() == 4);
  // V = 1.0 is the nominal itself
  CHECK(lib.lookup(GateKind::XOR2, kXorRise, 1.0) ==
        nominal.lookup(GateKind::XOR2, kXorRise, 1.0));
  const double f = voltage_scale_factor(0.7, 0.3, 1.3);
  CHECK(lib.lookup(GateKind::XOR2, kXorRise, 0.7).mu_ps ==
        doctest::Approx(13.6 * f).epsilon(1e-12));
  CHECK(lib.lookup(GateKind::XOR2, kXorRise, 0.7).sigma_ps ==
        doctest::Approx(2.5 * f).epsilon(1e-12));
  CHECK(lib.missing_keys().empty());
}

TEST_CASE("property: synthesized mu decreases strictly with voltage") {
  const CharLib nominal = load_charlib_file(fixture("charlib_nominal_1v.csv"));
  std::vector<double> grid;
  for (double v = 0.35; v <= 1.0; v += 0.05) grid.push_back(v);
  const CharLib lib = synth_charlib(nominal, grid);
  double prev_mu = -1.0;
  for (double v : grid) {
    const double mu = lib.lookup(GateKind::NAND2, {0b11, 0b01}, v).mu_ps;
    if (prev_mu > 0.0) CHECK(mu < prev_mu);
    prev_mu = mu;
  }
}
