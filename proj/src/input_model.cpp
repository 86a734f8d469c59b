#include "vost/input_model.hpp"

#include <cmath>

#include "vost/errors.hpp"

namespace vost {

void InputModel::pin(const std::string& input, int prev, int next) {
  std::array<double, 4> probs{};
  probs[static_cast<size_t>(tr_index(prev, next))] = 1.0;
  per_input_[input] = probs;
}

InputModel InputModel::pinned(const Netlist& n, uint64_t prev_bits,
                              uint64_t next_bits) {
  InputModel im;
  const auto& pis = n.primary_inputs();
  for (size_t i = 0; i < pis.size(); ++i)
    im.pin(n.net_name(pis[i]), static_cast<int>((prev_bits >> i) & 1u),
           static_cast<int>((next_bits >> i) & 1u));
  return im;
}

void InputModel::set(const std::string& input,
                     const std::array<double, 4>& probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw numeric_error("input model: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw numeric_error("input model: probabilities for '" + input +
                        "' sum to " + std::to_string(sum));
  per_input_[input] = probs;
}

const std::array<double, 4>& InputModel::probs(const std::string& input) const {
  auto it = per_input_.find(input);
  return it == per_input_.end() ? default_probs_ : it->second;
}

} // namespace vost
