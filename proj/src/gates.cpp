#include "vost/gates.hpp"

namespace vost {

GateKind gate_kind_from(std::string_view name) {
  if (name == "NOT") return GateKind::NOT;
  if (name == "AND2") return GateKind::AND2;
  if (name == "OR2") return GateKind::OR2;
  if (name == "NAND2") return GateKind::NAND2;
  if (name == "NOR2") return GateKind::NOR2;
  if (name == "XOR2") return GateKind::XOR2;
  if (name == "XNOR2") return GateKind::XNOR2;
  throw parse_error("unknown gate type '" + std::string(name) + "'");
}

std::string bits_to_string(unsigned bits, int width) {
  std::string s(static_cast<size_t>(width), '0');
  for (int i = 0; i < width; ++i)
    if (bits & (1u << (width - 1 - i))) s[static_cast<size_t>(i)] = '1';
  return s;
}

unsigned bits_from_string(std::string_view s, int width) {
  if (static_cast<int>(s.size()) != width)
    throw parse_error("bit string '" + std::string(s) + "' should have " +
                      std::to_string(width) + " bits");
  unsigned v = 0;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw parse_error("bit string '" + std::string(s) + "' has non-binary digit");
    v = (v << 1) | static_cast<unsigned>(c - '0');
  }
  return v;
}

} // namespace vost
