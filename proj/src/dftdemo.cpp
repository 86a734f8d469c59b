#include "vost/dftdemo.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <optional>
#include <thread>

namespace vost {

namespace {

constexpr int64_t kSumMin = 0, kSumMax = 510;   // 9-bit unsigned word
constexpr int64_t kDiffMin = -255, kDiffMax = 255; // 9-bit two's complement

int64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
  uint64_t z = seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  return static_cast<int64_t>(z ^ (z >> 31));
}

//! Packed primary-input bits for pixel values (a, b), matching the fixture's
//! input names a0..a7 / b0..b7 in their declared order.
uint64_t pack_inputs(const Netlist& nl, int64_t a, int64_t b) {
  uint64_t bits = 0;
  const auto& pis = nl.primary_inputs();
  for (size_t i = 0; i < pis.size(); ++i) {
    const std::string& name = nl.net_name(pis[i]);
    if (name.size() < 2 || (name[0] != 'a' && name[0] != 'b'))
      throw usage_error("demo netlist: unexpected input name '" + name + "'");
    const int pos = std::stoi(name.substr(1));
    const int64_t v = name[0] == 'a' ? a : b;
    bits |= static_cast<uint64_t>((v >> pos) & 1) << i;
  }
  return bits;
}

//! Canonical 8-bit input pair realizing a given word value.
std::pair<int64_t, int64_t> canonical_stimulus(const std::string& word,
                                               int64_t value) {
  if (word == "sum") {
    const int64_t a = std::min<int64_t>(value, 255);
    return {a, value - a};
  }
  const int64_t a = std::max<int64_t>(value, 0);
  return {a, a - value};
}

//! Lazily filled per-word PMF table; contents depend only on the context
//! key, so the fill order (and therefore threading) cannot change results.
class LazyTable {
public:
  LazyTable(std::string word, const Netlist& nl, const CharLib& lib,
            const PipelineConfig& cfg, const AnalysisResult* stationary)
      : word_(std::move(word)), nl_(nl), lib_(lib), cfg_(cfg),
        stationary_(stationary) {}

  const ErrorPMF& get(int64_t initial, int64_t final) {
    const std::pair<int64_t, int64_t> key{initial, final};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    ErrorPMF pmf = build(initial, final);
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(key, std::move(pmf)).first->second;
  }

private:
  ErrorPMF build(int64_t initial, int64_t final) const {
    if (cfg_.conditioning == Conditioning::marginal || initial == final)
      return make_error_pmf(*stationary_, word_, initial, final, cfg_.t_clk_ps);
    // condition the analysis on a canonical stimulus for this transition
    const auto [a0, b0] = canonical_stimulus(word_, initial);
    const auto [a1, b1] = canonical_stimulus(word_, final);
    const InputModel im = InputModel::pinned(nl_, pack_inputs(nl_, a0, b0),
                                             pack_inputs(nl_, a1, b1));
    AnalyzeOptions opts;
    opts.vdd = cfg_.vdd;
    opts.grid = cfg_.grid;
    opts.corr = CorrMode::independent; // pinned inputs make products exact
    const AnalysisResult res = analyze(nl_, lib_, im, opts);
    return make_error_pmf(res, word_, initial, final, cfg_.t_clk_ps);
  }

  std::string word_;
  const Netlist& nl_;
  const CharLib& lib_;
  const PipelineConfig& cfg_;
  const AnalysisResult* stationary_;
  mutable std::mutex mu_;
  std::map<std::pair<int64_t, int64_t>, ErrorPMF> cache_;
};

uint8_t clamp_pixel(int64_t v) {
  return static_cast<uint8_t>(std::min<int64_t>(255, std::max<int64_t>(0, v)));
}

} // namespace

std::pair<int64_t, int64_t> dft2(int64_t a, int64_t b) {
  if (a < 0 || a > 255 || b < 0 || b > 255)
    throw numeric_error("dft2: inputs must be 8-bit values");
  const int64_t s = a + b;
  const int64_t d = a - b;
  if (s < kSumMin || s > kSumMax || d < kDiffMin || d > kDiffMax)
    throw numeric_error("dft2: result outside word range");
  return {s, d};
}

std::pair<int64_t, int64_t> idft2(int64_t s, int64_t d) {
  auto half_away = [](int64_t x) {
    if (x % 2 == 0) return x / 2;
    return x > 0 ? (x + 1) / 2 : (x - 1) / 2;
  };
  return {half_away(s + d), half_away(s - d)};
}

DemoResult run_pipeline(const ImageGray& img, const Netlist& dft_netlist,
                        const CharLib& lib, const PipelineConfig& cfg) {
  using clock = std::chrono::steady_clock;
  if (cfg.quant_shift < 0 || cfg.quant_shift > 7)
    throw usage_error("demo: quant_shift must be in [0, 7]");

  DemoResult out;
  out.reconstructed = img;

  const auto t0 = clock::now();
  std::optional<AnalysisResult> stationary;
  std::optional<LazyTable> sum_table, diff_table;
  if (cfg.mode == DemoMode::analytical_inject) {
    AnalyzeOptions opts;
    opts.vdd = cfg.vdd;
    opts.grid = cfg.grid;
    stationary = analyze(dft_netlist, lib, InputModel::uniform(), opts);
    sum_table.emplace("sum", dft_netlist, lib, cfg, &*stationary);
    diff_table.emplace("diff", dft_netlist, lib, cfg, &*stationary);
  }
  const auto t1 = clock::now();
  out.analysis_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  const int shift = cfg.quant_shift;
  const int w = img.width;

  auto process_row = [&](int y) {
    const int pairs = w / 2;
    if (pairs == 0) return;
    std::vector<int64_t> s_clean(pairs), d_clean(pairs);
    std::vector<int64_t> q0(pairs), q1(pairs);
    for (int p = 0; p < pairs; ++p) {
      q0[p] = img.at(2 * p, y) >> shift;
      q1[p] = img.at(2 * p + 1, y) >> shift;
      const auto [s, d] = dft2(q0[p], q1[p]);
      s_clean[p] = s;
      d_clean[p] = d;
    }

    std::vector<int64_t> s_out = s_clean, d_out = d_clean;
    if (cfg.mode == DemoMode::analytical_inject) {
      // per-word injector state restarts each row (previous value 0)
      InjectorTable st("sum", cfg.t_clk_ps, cfg.vdd);
      InjectorTable dt("diff", cfg.t_clk_ps, cfg.vdd);
      int64_t prev_s = 0, prev_d = 0;
      for (int p = 0; p < pairs; ++p) {
        st.put(sum_table->get(prev_s, s_clean[p]));
        dt.put(diff_table->get(prev_d, d_clean[p]));
        prev_s = s_clean[p];
        prev_d = d_clean[p];
      }
      s_out = inject(s_clean, st,
                     static_cast<uint64_t>(mix_seed(cfg.seed, y, 0)));
      d_out = inject(d_clean, dt,
                     static_cast<uint64_t>(mix_seed(cfg.seed, y, 1)));
    } else if (cfg.mode == DemoMode::mc_latched) {
      const WordDef& sw = dft_netlist.word("sum");
      const WordDef& dw = dft_netlist.word("diff");
      int64_t pa = 0, pb = 0; // previous pair's inputs, zero at row start
      for (int p = 0; p < pairs; ++p) {
        const uint64_t prev_bits = pack_inputs(dft_netlist, pa, pb);
        const uint64_t next_bits = pack_inputs(dft_netlist, q0[p], q1[p]);
        Rng rng = Rng::stream(cfg.seed,
                              static_cast<uint64_t>(y) * 65536u +
                                  static_cast<uint64_t>(p));
        const EventTrace trace =
            simulate_pair(dft_netlist, lib, prev_bits, next_bits, cfg.vdd,
                          rng, cfg.mc_semantics);
        const LogicState prev_state = evaluate_packed(dft_netlist, prev_bits);
        LogicState latched = prev_state;
        for (const WordDef* word : {&sw, &dw})
          for (NetId b : word->bits) {
            const auto id = static_cast<size_t>(b);
            latched[id] = static_cast<uint8_t>(trace_value_at(
                trace[id], prev_state[id], cfg.t_clk_ps));
          }
        s_out[p] = word_value(sw, latched);
        d_out[p] = word_value(dw, latched);
        pa = q0[p];
        pb = q1[p];
      }
    }

    for (int p = 0; p < pairs; ++p) {
      const auto [ra, rb] = idft2(s_out[p], d_out[p]);
      out.reconstructed.data[static_cast<size_t>(y) * static_cast<size_t>(w) +
                             static_cast<size_t>(2 * p)] =
          clamp_pixel(ra << shift);
      out.reconstructed.data[static_cast<size_t>(y) * static_cast<size_t>(w) +
                             static_cast<size_t>(2 * p + 1)] =
          clamp_pixel(rb << shift);
    }
    // an odd trailing pixel passes through untouched
  };

  const int nt = std::max(1, cfg.threads);
  if (nt == 1 || img.height < 2 || w % 2 != 0) {
    for (int y = 0; y < img.height; ++y) process_row(y);
  } else {
    std::vector<std::thread> pool;
    const int rows_per = (img.height + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
      const int lo = t * rows_per;
      const int hi = std::min(img.height, lo + rows_per);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        for (int y = lo; y < hi; ++y) process_row(y);
      });
    }
    for (auto& th : pool) th.join();
  }

  out.pipeline_ms = std::chrono::duration<double, std::milli>(
                        clock::now() - t1)
                        .count();
  out.psnr_db = psnr(img, out.reconstructed);
  return out;
}

} // namespace vost
