#include "vost/netlist.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace vost {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& why) { throw parse_error("netlist: " + why); }

} // namespace

Netlist Netlist::build(std::vector<std::string> net_names,
                       std::vector<NetId> primary_inputs,
                       std::vector<NetId> primary_outputs,
                       std::vector<Gate> gates, std::vector<WordDef> words) {
  Netlist n;
  n.net_names_ = std::move(net_names);
  n.primary_inputs_ = std::move(primary_inputs);
  n.primary_outputs_ = std::move(primary_outputs);
  n.gates_ = std::move(gates);
  n.words_ = std::move(words);
  for (NetId i = 0; i < static_cast<NetId>(n.net_names_.size()); ++i)
    n.net_index_[n.net_names_[static_cast<size_t>(i)]] = i;

  // single-driver check
  n.driver_.assign(n.net_names_.size(), -2); // -2 undriven, -1 primary input
  for (NetId pi : n.primary_inputs_) {
    if (n.driver_[static_cast<size_t>(pi)] != -2)
      fail("primary input '" + n.net_name(pi) + "' declared twice");
    n.driver_[static_cast<size_t>(pi)] = -1;
  }
  for (size_t g = 0; g < n.gates_.size(); ++g) {
    auto& slot = n.driver_[static_cast<size_t>(n.gates_[g].output)];
    if (slot != -2)
      fail("multiple drivers on net '" + n.net_name(n.gates_[g].output) + "'");
    slot = static_cast<int32_t>(g);
  }
  for (size_t id = 0; id < n.net_names_.size(); ++id)
    if (n.driver_[id] == -2)
      fail("undeclared net '" + n.net_names_[id] +
           "' (used but not driven by any gate or primary input)");

  for (NetId po : n.primary_outputs_)
    if (n.driver_[static_cast<size_t>(po)] == -2)
      fail("primary output '" + n.net_name(po) + "' is undriven");

  for (const auto& w : n.words_) {
    std::vector<NetId> seen;
    for (NetId b : w.bits) {
      if (std::find(n.primary_outputs_.begin(), n.primary_outputs_.end(), b) ==
          n.primary_outputs_.end())
        fail("word '" + w.name + "' references non-output net '" +
             n.net_name(b) + "'");
      if (std::find(seen.begin(), seen.end(), b) != seen.end())
        fail("word '" + w.name + "' repeats net '" + n.net_name(b) + "'");
      seen.push_back(b);
    }
  }

  // Kahn's algorithm, ready set ordered by gate id for a unique result
  std::vector<int> pending(n.gates_.size(), 0);
  std::vector<std::vector<size_t>> consumers(n.net_names_.size());
  for (size_t g = 0; g < n.gates_.size(); ++g) {
    for (NetId in : n.gates_[g].inputs) {
      if (n.driver_[static_cast<size_t>(in)] >= 0) ++pending[g];
      consumers[static_cast<size_t>(in)].push_back(g);
    }
  }
  auto by_id = [&](size_t a, size_t b) { return n.gates_[a].id > n.gates_[b].id; };
  std::priority_queue<size_t, std::vector<size_t>, decltype(by_id)> ready(by_id);
  for (size_t g = 0; g < n.gates_.size(); ++g)
    if (pending[g] == 0) ready.push(g);
  while (!ready.empty()) {
    const size_t g = ready.top();
    ready.pop();
    n.topo_.push_back(g);
    for (size_t c : consumers[static_cast<size_t>(n.gates_[g].output)])
      if (--pending[c] == 0) ready.push(c);
  }
  if (n.topo_.size() != n.gates_.size()) {
    // walk the unresolved gates to print one cycle
    std::vector<size_t> cycle;
    size_t cur = 0;
    for (size_t g = 0; g < n.gates_.size(); ++g)
      if (pending[g] > 0) { cur = g; break; }
    std::vector<int> mark(n.gates_.size(), 0);
    while (mark[cur] == 0) {
      mark[cur] = 1;
      cycle.push_back(cur);
      for (NetId in : n.gates_[cur].inputs) {
        const int32_t d = n.driver_[static_cast<size_t>(in)];
        if (d >= 0 && pending[static_cast<size_t>(d)] > 0) {
          cur = static_cast<size_t>(d);
          break;
        }
      }
    }
    std::string msg = "combinational loop:";
    for (size_t g : cycle) msg += " " + n.gates_[g].id;
    fail(msg);
  }
  return n;
}

NetId Netlist::net(const std::string& name) const {
  auto it = net_index_.find(name);
  if (it == net_index_.end())
    throw usage_error("unknown net '" + name + "'");
  return it->second;
}

const WordDef& Netlist::word(const std::string& name) const {
  for (const auto& w : words_)
    if (w.name == name) return w;
  throw usage_error("unknown word '" + name + "'");
}

Netlist parse_netlist(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(e.what());
  }
  if (!j.is_object() || !j.contains("inputs") || !j.contains("outputs") ||
      !j.contains("gates"))
    fail("expected object with inputs, outputs, gates");

  std::vector<std::string> names;
  std::unordered_map<std::string, NetId> index;
  auto intern = [&](const std::string& s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    const NetId id = static_cast<NetId>(names.size());
    names.push_back(s);
    index[s] = id;
    return id;
  };

  std::vector<NetId> pis, pos;
  for (const auto& s : j["inputs"]) pis.push_back(intern(s.get<std::string>()));
  for (const auto& s : j["outputs"]) pos.push_back(intern(s.get<std::string>()));

  std::vector<Gate> gates;
  for (const auto& jg : j["gates"]) {
    Gate g;
    g.id = jg.at("id").get<std::string>();
    g.kind = gate_kind_from(jg.at("type").get<std::string>());
    for (const auto& s : jg.at("in")) g.inputs.push_back(intern(s.get<std::string>()));
    if (static_cast<int>(g.inputs.size()) != arity(g.kind))
      fail("gate '" + g.id + "' has " + std::to_string(g.inputs.size()) +
           " inputs, " + std::string(gate_name(g.kind)) + " needs " +
           std::to_string(arity(g.kind)));
    g.output = intern(jg.at("out").get<std::string>());
    gates.push_back(std::move(g));
  }

  std::vector<WordDef> words;
  if (j.contains("words")) {
    for (const auto& jw : j["words"]) {
      WordDef w;
      w.name = jw.at("name").get<std::string>();
      for (const auto& s : jw.at("bits")) w.bits.push_back(intern(s.get<std::string>()));
      w.is_signed = jw.value("signed", false);
      words.push_back(std::move(w));
    }
  }

  return Netlist::build(std::move(names), std::move(pis), std::move(pos),
                        std::move(gates), std::move(words));
}

Netlist parse_netlist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  return parse_netlist(in);
}

Netlist parse_netlist_string(const std::string& text) {
  std::istringstream in(text);
  return parse_netlist(in);
}

std::string serialize_netlist(const Netlist& n) {
  json j;
  j["inputs"] = json::array();
  for (NetId id : n.primary_inputs()) j["inputs"].push_back(n.net_name(id));
  j["outputs"] = json::array();
  for (NetId id : n.primary_outputs()) j["outputs"].push_back(n.net_name(id));
  j["gates"] = json::array();
  for (const auto& g : n.gates()) {
    json jg;
    jg["id"] = g.id;
    jg["type"] = std::string(gate_name(g.kind));
    jg["in"] = json::array();
    for (NetId in : g.inputs) jg["in"].push_back(n.net_name(in));
    jg["out"] = n.net_name(g.output);
    j["gates"].push_back(std::move(jg));
  }
  j["words"] = json::array();
  for (const auto& w : n.words()) {
    json jw;
    jw["name"] = w.name;
    jw["bits"] = json::array();
    for (NetId b : w.bits) jw["bits"].push_back(n.net_name(b));
    jw["signed"] = w.is_signed;
    j["words"].push_back(std::move(jw));
  }
  return j.dump(1);
}

LogicState evaluate(const Netlist& n,
                    const std::unordered_map<std::string, int>& inputs) {
  LogicState st(n.net_count(), 0);
  for (NetId pi : n.primary_inputs()) {
    auto it = inputs.find(n.net_name(pi));
    if (it == inputs.end())
      throw usage_error("missing value for primary input '" + n.net_name(pi) + "'");
    st[static_cast<size_t>(pi)] = it->second ? 1 : 0;
  }
  for (size_t g : n.topo_order()) {
    const Gate& gate = n.gates()[g];
    unsigned packed = 0;
    for (NetId in : gate.inputs)
      packed = (packed << 1) | st[static_cast<size_t>(in)];
    st[static_cast<size_t>(gate.output)] =
        static_cast<uint8_t>(eval_gate(gate.kind, packed));
  }
  return st;
}

LogicState evaluate_packed(const Netlist& n, uint64_t input_bits) {
  LogicState st(n.net_count(), 0);
  const auto& pis = n.primary_inputs();
  for (size_t i = 0; i < pis.size(); ++i)
    st[static_cast<size_t>(pis[i])] = static_cast<uint8_t>((input_bits >> i) & 1u);
  for (size_t g : n.topo_order()) {
    const Gate& gate = n.gates()[g];
    unsigned packed = 0;
    for (NetId in : gate.inputs)
      packed = (packed << 1) | st[static_cast<size_t>(in)];
    st[static_cast<size_t>(gate.output)] =
        static_cast<uint8_t>(eval_gate(gate.kind, packed));
  }
  return st;
}

int64_t word_value(const WordDef& w, const LogicState& state) {
  int64_t v = 0;
  for (size_t i = 0; i < w.bits.size(); ++i)
    v |= static_cast<int64_t>(state[static_cast<size_t>(w.bits[i])] & 1) << i;
  if (w.is_signed && (v & (int64_t{1} << (w.bits.size() - 1))))
    v -= int64_t{1} << w.bits.size();
  return v;
}

int64_t word_value(const Netlist& n, const std::string& word,
                   const LogicState& state) {
  return word_value(n.word(word), state);
}

} // namespace vost
