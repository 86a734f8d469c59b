#include "vost/charlib.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace vost {

void CharLib::insert(GateKind kind, TransitionPair tr, double vdd, CharEntry e) {
  if (!(e.sigma_ps > 0.0)) throw numeric_error("char entry: sigma must be > 0");
  if (e.mu_ps < 0.0) throw numeric_error("char entry: mu must be >= 0");
  auto& pk = kinds_[kind];
  if (pk.by_transition.empty()) pk.by_transition.resize(transition_count(kind));
  pk.by_transition[tr.code(arity(kind))][vdd] = e;
  if (std::find(voltages_.begin(), voltages_.end(), vdd) == voltages_.end()) {
    voltages_.push_back(vdd);
    std::sort(voltages_.begin(), voltages_.end());
  }
}

bool CharLib::has(GateKind kind, TransitionPair tr, double vdd) const {
  auto it = kinds_.find(kind);
  if (it == kinds_.end()) return false;
  const auto& m = it->second.by_transition[tr.code(arity(kind))];
  return m.find(vdd) != m.end();
}

CharEntry CharLib::lookup(GateKind kind, TransitionPair tr, double vdd) const {
  auto it = kinds_.find(kind);
  if (it == kinds_.end())
    throw numeric_error("charlib: no entries for gate kind " +
                        std::string(gate_name(kind)));
  const auto& m = it->second.by_transition[tr.code(arity(kind))];
  if (m.empty())
    throw numeric_error("charlib: unknown transition " +
                        std::string(gate_name(kind)) + " " +
                        bits_to_string(tr.prev, arity(kind)) + "->" +
                        bits_to_string(tr.next, arity(kind)));
  if (vdd < voltages_.front() || vdd > voltages_.back()) {
    std::ostringstream os;
    os << "charlib: vdd " << vdd << " outside grid ["
       << voltages_.front() << ", " << voltages_.back() << "]";
    throw numeric_error(os.str());
  }
  if (auto hit = m.find(vdd); hit != m.end()) return hit->second;

  auto hi = m.upper_bound(vdd);
  if (hi == m.begin() || hi == m.end())
    throw numeric_error("charlib: vdd not bracketed by entries for " +
                        std::string(gate_name(kind)));
  auto lo = std::prev(hi);
  const double t = (vdd - lo->first) / (hi->first - lo->first);
  return CharEntry{
      lo->second.mu_ps + t * (hi->second.mu_ps - lo->second.mu_ps),
      lo->second.sigma_ps + t * (hi->second.sigma_ps - lo->second.sigma_ps)};
}

std::vector<std::string> CharLib::missing_keys() const {
  std::vector<std::string> missing;
  for (const auto& [kind, pk] : kinds_) {
    const int n = arity(kind);
    for (unsigned code = 0; code < transition_count(kind); ++code) {
      const TransitionPair tr = transition_from_code(code, n);
      if (!output_changes(kind, tr)) continue;
      for (double v : voltages_) {
        if (!has(kind, tr, v)) {
          std::ostringstream os;
          os << gate_name(kind) << ' ' << bits_to_string(tr.prev, n) << "->"
             << bits_to_string(tr.next, n) << " @ " << v << " V";
          missing.push_back(os.str());
        }
      }
    }
  }
  return missing;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void fail_line(int line_no, const std::string& why) {
  throw parse_error("charlib line " + std::to_string(line_no) + ": " + why);
}

} // namespace

CharLib load_charlib(std::istream& in) {
  CharLib lib;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (split_csv(line) !=
          std::vector<std::string>{"gate", "prev", "next", "vdd", "mu_ps",
                                   "sigma_ps"})
        fail_line(line_no, "expected header gate,prev,next,vdd,mu_ps,sigma_ps");
      header_seen = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 6) fail_line(line_no, "expected 6 fields");
    GateKind kind;
    try {
      kind = gate_kind_from(f[0]);
    } catch (const Error& e) {
      fail_line(line_no, e.what());
    }
    const int n = arity(kind);
    TransitionPair tr;
    double vdd, mu, sigma;
    try {
      tr.prev = static_cast<uint8_t>(bits_from_string(f[1], n));
      tr.next = static_cast<uint8_t>(bits_from_string(f[2], n));
      vdd = std::stod(f[3]);
      mu = std::stod(f[4]);
      sigma = std::stod(f[5]);
    } catch (const std::exception& e) {
      fail_line(line_no, e.what());
    }
    if (!(sigma > 0.0)) fail_line(line_no, "sigma must be > 0");
    if (mu < 0.0) fail_line(line_no, "mu must be >= 0");
    // sigma > mu is physically suspicious but legal; accepted as-is
    lib.insert(kind, tr, vdd, CharEntry{mu, sigma});
  }
  if (!header_seen) throw parse_error("charlib: empty file");
  if (auto missing = lib.missing_keys(); !missing.empty()) {
    std::string msg = "charlib incomplete, missing entries:";
    for (const auto& k : missing) msg += "\n  " + k;
    throw Error(ErrorKind::incomplete_library, msg);
  }
  return lib;
}

CharLib load_charlib_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open charlib file '" + path + "'");
  return load_charlib(in);
}

void save_charlib(const CharLib& lib, std::ostream& out) {
  out << "gate,prev,next,vdd,mu_ps,sigma_ps\n";
  out << std::setprecision(17);
  for (GateKind kind : {GateKind::AND2, GateKind::NAND2, GateKind::NOR2,
                        GateKind::NOT, GateKind::OR2, GateKind::XNOR2,
                        GateKind::XOR2}) {
    const int n = arity(kind);
    for (unsigned code = 0; code < transition_count(kind); ++code) {
      const TransitionPair tr = transition_from_code(code, n);
      for (double v : lib.voltages()) {
        if (!lib.has(kind, tr, v)) continue;
        const CharEntry e = lib.lookup(kind, tr, v);
        out << gate_name(kind) << ',' << bits_to_string(tr.prev, n) << ','
            << bits_to_string(tr.next, n) << ',' << v << ',' << e.mu_ps << ','
            << e.sigma_ps << '\n';
      }
    }
  }
}

void save_charlib_file(const CharLib& lib, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open '" + path + "' for writing");
  save_charlib(lib, out);
}

double voltage_scale_factor(double vdd, double vth, double alpha_exp) {
  if (!(vdd > vth))
    throw numeric_error("voltage " + std::to_string(vdd) +
                        " V not above threshold " + std::to_string(vth) + " V");
  return vdd * std::pow(1.0 - vth, alpha_exp) /
         std::pow(vdd - vth, alpha_exp);
}

CharLib synth_charlib(const CharLib& nominal, const std::vector<double>& voltages,
                      double vth, double alpha_exp) {
  CharLib out;
  for (double v : voltages) {
    const double f = voltage_scale_factor(v, vth, alpha_exp);
    for (GateKind kind : {GateKind::NOT, GateKind::AND2, GateKind::OR2,
                          GateKind::NAND2, GateKind::NOR2, GateKind::XOR2,
                          GateKind::XNOR2}) {
      const int n = arity(kind);
      for (unsigned code = 0; code < transition_count(kind); ++code) {
        const TransitionPair tr = transition_from_code(code, n);
        if (!nominal.has(kind, tr, 1.0)) continue;
        const CharEntry e = nominal.lookup(kind, tr, 1.0);
        out.insert(kind, tr, v, CharEntry{e.mu_ps * f, e.sigma_ps * f});
      }
    }
  }
  return out;
}

} // namespace vost
