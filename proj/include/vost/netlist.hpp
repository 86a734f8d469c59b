#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "vost/gates.hpp"

namespace vost {

using NetId = int32_t;

struct Gate {
  std::string id;
  GateKind kind;
  std::vector<NetId> inputs; // declared order
  NetId output;
};

//! Output-word declaration: bit nets LSB first, optionally two's complement.
struct WordDef {
  std::string name;
  std::vector<NetId> bits;
  bool is_signed = false;
};

//! Net values after evaluation, indexed by NetId.
using LogicState = std::vector<uint8_t>;

//! Combinational gate-level circuit. Every net has exactly one driver (a
//! primary input or a gate output) and the gate graph is acyclic; both are
//! enforced at parse time. Immutable once built.
class Netlist {
public:
  static Netlist build(std::vector<std::string> net_names,
                       std::vector<NetId> primary_inputs,
                       std::vector<NetId> primary_outputs,
                       std::vector<Gate> gates, std::vector<WordDef> words);

  const std::vector<std::string>& net_names() const { return net_names_; }
  const std::vector<NetId>& primary_inputs() const { return primary_inputs_; }
  const std::vector<NetId>& primary_outputs() const { return primary_outputs_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<WordDef>& words() const { return words_; }

  NetId net(const std::string& name) const;
  const std::string& net_name(NetId id) const { return net_names_[static_cast<size_t>(id)]; }
  size_t net_count() const { return net_names_.size(); }
  const WordDef& word(const std::string& name) const;

  //! Gate indices in dependency order, ties broken by gate id so the order
  //! is unique.
  const std::vector<size_t>& topo_order() const { return topo_; }

  //! Index of the gate driving a net, or -1 for primary inputs.
  int32_t driver_gate(NetId id) const { return driver_[static_cast<size_t>(id)]; }

private:
  std::vector<std::string> net_names_;
  std::unordered_map<std::string, NetId> net_index_;
  std::vector<NetId> primary_inputs_;
  std::vector<NetId> primary_outputs_;
  std::vector<Gate> gates_;
  std::vector<WordDef> words_;
  std::vector<size_t> topo_;
  std::vector<int32_t> driver_;
};

//! Parse the JSON schema {"inputs": [...], "outputs": [...], "gates":
//! [{"id","type","in","out"}], "words": [{"name","bits","signed"}]}.
Netlist parse_netlist(std::istream& in);
Netlist parse_netlist_file(const std::string& path);
Netlist parse_netlist_string(const std::string& text);

//! Canonical JSON form; parse(serialize(n)) reproduces n.
std::string serialize_netlist(const Netlist& n);

//! Zero-delay functional evaluation. `inputs` maps every primary input name
//! to a bit value.
LogicState evaluate(const Netlist& n,
                    const std::unordered_map<std::string, int>& inputs);

//! Evaluation from packed bits: bit i of `input_bits` is primary input i in
//! declared order.
LogicState evaluate_packed(const Netlist& n, uint64_t input_bits);

//! Value of a declared word under a logic state (two's complement when the
//! word is signed).
int64_t word_value(const Netlist& n, const std::string& word,
                   const LogicState& state);

int64_t word_value(const WordDef& w, const LogicState& state);

} // namespace vost
