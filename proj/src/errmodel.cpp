#include "vost/errmodel.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

namespace vost {

std::vector<double> bit_violation_probs(const AnalysisResult& result,
                                        const std::string& word,
                                        int64_t initial, int64_t final,
                                        double t_clk_ps) {
  const WordDef& w = result.word(word);
  std::vector<double> probs(w.bits.size(), 0.0);
  for (size_t i = 0; i < w.bits.size(); ++i) {
    const int b0 = static_cast<int>((initial >> i) & 1);
    const int b1 = static_cast<int>((final >> i) & 1);
    if (b0 == b1) continue;
    const NetProfile& p = result.profile(w.bits[i]);
    const auto tr = static_cast<size_t>(tr_index(b0, b1));
    probs[i] = p.alpha[tr] > 0.0 ? exceed_prob(p.dist[tr], t_clk_ps) : 0.0;
  }
  return probs;
}

ErrorPMF error_pmf(const AnalysisResult& result, const std::string& word,
                   const std::vector<double>& bit_probs, int64_t initial,
                   int64_t final) {
  const WordDef& w = result.word(word);
  if (bit_probs.size() != w.bits.size())
    throw usage_error("error_pmf: bit probability count does not match word");

  std::vector<size_t> changing;
  for (size_t i = 0; i < w.bits.size(); ++i)
    if (((initial >> i) & 1) != ((final >> i) & 1)) changing.push_back(i);
  if (changing.size() > 24)
    throw numeric_error("error_pmf: more than 24 changing bits");

  ErrorPMF out;
  out.word = word;
  out.initial = initial;
  out.final = final;
  out.t_clk_ps = 0.0;
  out.vdd = result.vdd();

  const uint32_t subsets = 1u << changing.size();
  for (uint32_t late = 0; late < subsets; ++late) {
    double p = 1.0;
    int64_t latched_bits = final;
    for (size_t j = 0; j < changing.size(); ++j) {
      const size_t bit = changing[j];
      if (late & (1u << j)) {
        p *= bit_probs[bit];
        // a late bit holds its initial value
        latched_bits = (latched_bits & ~(int64_t{1} << bit)) |
                       (((initial >> bit) & 1) << bit);
      } else {
        p *= 1.0 - bit_probs[bit];
      }
    }
    if (p == 0.0) continue;
    // re-interpret the latched bit pattern under the word's signedness
    int64_t latched = latched_bits & ((int64_t{1} << w.bits.size()) - 1);
    if (w.is_signed && (latched & (int64_t{1} << (w.bits.size() - 1))))
      latched -= int64_t{1} << w.bits.size();
    out.pmf[latched - final] += p;
  }
  out.pmf.try_emplace(0, 0.0); // magnitude 0 entry is always present
  return out;
}

void InjectorTable::put(ErrorPMF pmf) {
  table_[{pmf.initial, pmf.final}] = std::move(pmf);
}

bool InjectorTable::has(int64_t initial, int64_t final) const {
  return table_.count({initial, final}) > 0;
}

const ErrorPMF& InjectorTable::at(int64_t initial, int64_t final) const {
  auto it = table_.find({initial, final});
  if (it == table_.end())
    throw usage_error("injector table: missing context " +
                      std::to_string(initial) + "->" + std::to_string(final));
  return it->second;
}

void InjectorTable::write_json(std::ostream& os) const {
  nlohmann::json j;
  j["word"] = word_;
  j["t_clk_ps"] = t_clk_ps_;
  j["vdd"] = vdd_;
  nlohmann::json jt = nlohmann::json::object();
  for (const auto& [key, pmf] : table_) {
    nlohmann::json jp = nlohmann::json::object();
    for (const auto& [mag, p] : pmf.pmf) jp[std::to_string(mag)] = p;
    jt[std::to_string(key.first) + ":" + std::to_string(key.second)] = jp;
  }
  j["contexts"] = std::move(jt);
  os << j.dump(1) << '\n';
}

ErrorPMF make_error_pmf(const AnalysisResult& result, const std::string& word,
                        int64_t initial, int64_t final, double t_clk_ps) {
  const auto probs = bit_violation_probs(result, word, initial, final, t_clk_ps);
  ErrorPMF pmf = error_pmf(result, word, probs, initial, final);
  pmf.t_clk_ps = t_clk_ps;
  return pmf;
}

int64_t sample_error(const ErrorPMF& pmf, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  int64_t last = 0;
  for (const auto& [mag, p] : pmf.pmf) {
    acc += p;
    last = mag;
    if (u < acc) return mag;
  }
  return last;
}

std::vector<int64_t> inject(const std::vector<int64_t>& clean_stream,
                            const InjectorTable& table, uint64_t seed) {
  std::vector<int64_t> out;
  out.reserve(clean_stream.size());
  Rng rng = Rng::stream(seed, 0);
  int64_t prev = 0;
  for (const int64_t clean : clean_stream) {
    const ErrorPMF& pmf = table.at(prev, clean);
    out.push_back(clean + sample_error(pmf, rng));
    prev = clean;
  }
  return out;
}

void write_error_pmf_csv(const ErrorPMF& pmf, std::ostream& os) {
  os << "magnitude,probability\n";
  for (const auto& [mag, p] : pmf.pmf) os << mag << ',' << p << '\n';
}

} // namespace vost
