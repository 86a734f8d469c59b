#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "vost/netlist.hpp"

namespace vost {

//! Transition index for a single net: prev*2 + next.
//! 0: 0->0, 1: 0->1, 2: 1->0, 3: 1->1.
constexpr int tr_index(int prev, int next) { return prev * 2 + next; }
constexpr int tr_prev(int tr) { return tr >> 1; }
constexpr int tr_next(int tr) { return tr & 1; }
constexpr const char* tr_name(int tr) {
  constexpr const char* names[4] = {"0->0", "0->1", "1->0", "1->1"};
  return names[tr];
}

//! Stochastic model of the primary-input vector pair: independent inputs,
//! each with its own distribution over the four transitions (uniform by
//! default), switching at t = 0.
class InputModel {
public:
  static InputModel uniform() { return InputModel{}; }

  //! Force one input to a fixed transition.
  void pin(const std::string& input, int prev, int next);

  //! Pin every input from packed previous/next assignments (bit i = input i
  //! in declared order).
  static InputModel pinned(const Netlist& n, uint64_t prev_bits,
                           uint64_t next_bits);

  void set(const std::string& input, const std::array<double, 4>& probs);
  const std::array<double, 4>& probs(const std::string& input) const;

private:
  std::array<double, 4> default_probs_{0.25, 0.25, 0.25, 0.25};
  std::unordered_map<std::string, std::array<double, 4>> per_input_;
};

} // namespace vost
