#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "vost/rng.hpp"
#include "vost/ssta.hpp"

namespace vost {

//! Distribution of the signed arithmetic error on an output word, given the
//! word's (initial, final) values and the clock period. Magnitude 0 is
//! always present; probabilities sum to 1.
struct ErrorPMF {
  std::string word;
  int64_t initial = 0;
  int64_t final = 0;
  double t_clk_ps = 0.0;
  double vdd = 0.0;
  std::map<int64_t, double> pmf;

  double prob(int64_t magnitude) const {
    auto it = pmf.find(magnitude);
    return it == pmf.end() ? 0.0 : it->second;
  }
};

//! Per-bit probability that the transition implied by initial -> final
//! completes after t_clk. Bits that do not change are zero. The conditioning
//! of the per-bit distributions is whatever went into `result` (stationary
//! input model or a pinned stimulus).
std::vector<double> bit_violation_probs(const AnalysisResult& result,
                                        const std::string& word,
                                        int64_t initial, int64_t final,
                                        double t_clk_ps);

//! Exact error PMF under per-bit independence: every subset of changing bits
//! may arrive late, and a late bit holds its initial value at the clock
//! edge. Error = latched word value - final word value.
ErrorPMF error_pmf(const AnalysisResult& result, const std::string& word,
                   const std::vector<double>& bit_probs, int64_t initial,
                   int64_t final);

//! Word-transition-keyed table of error PMFs for one word, clock and supply
//! point.
class InjectorTable {
public:
  InjectorTable(std::string word, double t_clk_ps, double vdd)
      : word_(std::move(word)), t_clk_ps_(t_clk_ps), vdd_(vdd) {}

  const std::string& word() const { return word_; }
  double t_clk_ps() const { return t_clk_ps_; }
  double vdd() const { return vdd_; }

  void put(ErrorPMF pmf);
  bool has(int64_t initial, int64_t final) const;
  const ErrorPMF& at(int64_t initial, int64_t final) const;

  const std::map<std::pair<int64_t, int64_t>, ErrorPMF>& contexts() const {
    return table_;
  }

  //! JSON keyed "initial:final".
  void write_json(std::ostream& os) const;

private:
  std::string word_;
  double t_clk_ps_;
  double vdd_;
  std::map<std::pair<int64_t, int64_t>, ErrorPMF> table_;
};

//! Build the table's context for one (initial, final) pair from an analysis
//! result.
ErrorPMF make_error_pmf(const AnalysisResult& result, const std::string& word,
                        int64_t initial, int64_t final, double t_clk_ps);

//! Draw an error magnitude from a PMF (inverse CDF over ascending
//! magnitudes).
int64_t sample_error(const ErrorPMF& pmf, Rng& rng);

//! Apply sampled errors to a clean word stream. The context of element k is
//! (clean[k-1], clean[k]) with clean[-1] = 0; every observed context must be
//! present in the table. Deterministic for a given seed.
std::vector<int64_t> inject(const std::vector<int64_t>& clean_stream,
                            const InjectorTable& table, uint64_t seed);

//! CSV dump `magnitude,probability`.
void write_error_pmf_csv(const ErrorPMF& pmf, std::ostream& os);

} // namespace vost
