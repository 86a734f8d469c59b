#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "vost/errors.hpp"

namespace vost {

enum class GateKind : uint8_t { NOT, AND2, OR2, NAND2, NOR2, XOR2, XNOR2 };

constexpr int arity(GateKind k) { return k == GateKind::NOT ? 1 : 2; }

constexpr std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::NOT: return "NOT";
    case GateKind::AND2: return "AND2";
    case GateKind::OR2: return "OR2";
    case GateKind::NAND2: return "NAND2";
    case GateKind::NOR2: return "NOR2";
    case GateKind::XOR2: return "XOR2";
    case GateKind::XNOR2: return "XNOR2";
  }
  return "?";
}

GateKind gate_kind_from(std::string_view name);

//! Evaluate a gate on packed input bits: bit (arity-1-i) of `inputs` holds
//! input i, matching the MSB-first text encoding ("10" = in0=1, in1=0).
constexpr int eval_gate(GateKind k, unsigned inputs) {
  switch (k) {
    case GateKind::NOT: return (~inputs) & 1u;
    case GateKind::AND2: return ((inputs >> 1) & (inputs)) & 1u;
    case GateKind::OR2: return ((inputs >> 1) | (inputs)) & 1u;
    case GateKind::NAND2: return (~((inputs >> 1) & inputs)) & 1u;
    case GateKind::NOR2: return (~((inputs >> 1) | inputs)) & 1u;
    case GateKind::XOR2: return ((inputs >> 1) ^ inputs) & 1u;
    case GateKind::XNOR2: return (~((inputs >> 1) ^ inputs)) & 1u;
  }
  return 0;
}

//! Input-state pair (previous, next) of a gate; each state is the packed bit
//! vector used by eval_gate. For an n-input gate there are 2^(2n) values.
struct TransitionPair {
  uint8_t prev = 0;
  uint8_t next = 0;

  constexpr unsigned code(int n_inputs) const {
    return (static_cast<unsigned>(prev) << n_inputs) | next;
  }
  bool operator==(const TransitionPair&) const = default;
};

constexpr unsigned transition_count(GateKind k) {
  return 1u << (2 * arity(k));
}

inline TransitionPair transition_from_code(unsigned code, int n_inputs) {
  const unsigned mask = (1u << n_inputs) - 1u;
  return TransitionPair{static_cast<uint8_t>((code >> n_inputs) & mask),
                        static_cast<uint8_t>(code & mask)};
}

inline bool output_changes(GateKind k, const TransitionPair& tr) {
  return eval_gate(k, tr.prev) != eval_gate(k, tr.next);
}

std::string bits_to_string(unsigned bits, int width);
unsigned bits_from_string(std::string_view s, int width);

} // namespace vost
