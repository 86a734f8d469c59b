// vost - state-dependent timing-error analysis for voltage-overscaled logic
//
// Subcommands: analyze (analytical transition delay profiles), mc (Monte
// Carlo dynamic-timing baseline), errtable (error-magnitude PMFs per
// output-word transition), demo (2-point transform image pipeline),
// synthlib (voltage scaling of a nominal characterization table).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vost/dftdemo.hpp"
#include "vost/errmodel.hpp"
#include "vost/manifest.hpp"
#include "vost/mcdta.hpp"
#include "vost/ssta.hpp"

namespace fs = std::filesystem;
using namespace vost;

namespace {

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::usage: return 1;
    case ErrorKind::parse: return 2;
    case ErrorKind::incomplete_library: return 3;
    case ErrorKind::numeric: return 4;
  }
  return 4;
}

//! Resolve an input path, falling back to $VOST_FIXTURE_DIR.
std::string resolve(const std::string& path) {
  if (fs::exists(path)) return path;
  if (const char* dir = std::getenv("VOST_FIXTURE_DIR")) {
    const fs::path alt = fs::path(dir) / path;
    if (fs::exists(alt)) return alt.string();
  }
  return path;
}

//! Load a characterization table and make it serve `vdd`: used directly when
//! the voltage grid covers it, otherwise synthesized from the 1.0 V entries.
CharLib lib_for_voltage(const std::string& path, double vdd, double vth,
                        double alpha_exp) {
  CharLib lib = load_charlib_file(path);
  if (vdd >= lib.voltages().front() && vdd <= lib.voltages().back()) return lib;
  const bool has_nominal =
      std::find(lib.voltages().begin(), lib.voltages().end(), 1.0) !=
      lib.voltages().end();
  if (!has_nominal)
    throw numeric_error("charlib does not cover " + std::to_string(vdd) +
                        " V and has no 1.0 V entries to scale from");
  return synth_charlib(lib, {vdd}, vth, alpha_exp);
}

std::string tr_file_tag(int tr) {
  static const char* tags[4] = {"0to0", "0to1", "1to0", "1to1"};
  return tags[static_cast<size_t>(tr)];
}

void write_tsv_file(const DelayDist& d, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write '" + path.string() + "'");
  write_dist_tsv(d, out);
}

nlohmann::json dist_json(const DelayDist& d) {
  nlohmann::json j;
  j["atom_weight"] = d.atom_weight();
  j["density"] = std::vector<double>(
      d.density().data(), d.density().data() + d.density().size());
  return j;
}

struct CommonOpts {
  std::string netlist_path;
  std::string charlib_path;
  double vdd = 0.7;
  double t_clk = 100.0;
  double grid_dt = 0.5;
  double grid_tmax = 400.0;
  double vth = 0.3;
  double alpha_exp = 1.3;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--netlist", o.netlist_path, "netlist JSON file")->required();
  cmd->add_option("--charlib", o.charlib_path, "characterization CSV file")
      ->required();
  cmd->add_option("--vdd", o.vdd, "supply voltage (V)");
  cmd->add_option("--tclk", o.t_clk, "clock period (ps)");
  cmd->add_option("--grid-dt", o.grid_dt, "time grid step (ps)");
  cmd->add_option("--grid-tmax", o.grid_tmax, "time grid span (ps)");
  cmd->add_option("--vth", o.vth, "threshold voltage of the scaling law (V)");
  cmd->add_option("--alpha", o.alpha_exp, "exponent of the scaling law");
  cmd->add_option("--out", o.out_dir, "output directory");
}

struct Loaded {
  Netlist netlist;
  CharLib lib;
  GridConfig grid;
};

Loaded load_common(const CommonOpts& o, RunManifest& manifest) {
  const std::string np = resolve(o.netlist_path);
  const std::string cp = resolve(o.charlib_path);
  manifest.input_file("netlist", np);
  manifest.input_file("charlib", cp);
  manifest.param("vdd", o.vdd);
  manifest.param("tclk_ps", o.t_clk);
  manifest.param("grid_dt_ps", o.grid_dt);
  manifest.param("grid_tmax_ps", o.grid_tmax);
  Loaded l{parse_netlist_file(np),
           lib_for_voltage(cp, o.vdd, o.vth, o.alpha_exp),
           GridConfig::make(o.grid_dt, o.grid_tmax)};
  fs::create_directories(o.out_dir);
  return l;
}

CorrMode parse_corr(const std::string& s) {
  if (s == "auto") return CorrMode::automatic;
  if (s == "independent") return CorrMode::independent;
  if (s == "exact") return CorrMode::exact_joint;
  throw usage_error("unknown correlation mode '" + s + "'");
}

EventSemantics parse_semantics(const std::string& s) {
  if (s == "inertial") return EventSemantics::reevaluate;
  if (s == "transport") return EventSemantics::transport;
  throw usage_error("unknown event semantics '" + s + "'");
}

int cmd_analyze(const CommonOpts& o, const std::string& corr) {
  RunManifest manifest("analyze");
  const Loaded l = load_common(o, manifest);
  manifest.param("corr", corr);

  AnalyzeOptions opts;
  opts.vdd = o.vdd;
  opts.grid = l.grid;
  opts.corr = parse_corr(corr);
  const AnalysisResult res = manifest.phase("analyze", [&] {
    return analyze(l.netlist, l.lib, InputModel::uniform(), opts);
  });

  nlohmann::json j;
  j["vdd"] = o.vdd;
  j["t_clk_ps"] = o.t_clk;
  j["grid"] = {{"dt_ps", l.grid.dt}, {"t_max_ps", l.grid.t_max()}};
  j["corr"] =
      res.corr_used() == CorrMode::exact_joint ? "exact" : "independent";
  nlohmann::json jo = nlohmann::json::object();
  manifest.phase("emit", [&] {
    for (NetId out : res.outputs()) {
      const std::string& name = res.net_name(out);
      const NetProfile& p = res.profile(out);
      nlohmann::json jn;
      const auto viol = res.violation_prob(name, o.t_clk);
      for (int tr = 0; tr < 4; ++tr) {
        nlohmann::json jt;
        jt["alpha"] = p.alpha[static_cast<size_t>(tr)];
        jt["logical_alpha"] = p.logical_alpha[static_cast<size_t>(tr)];
        jt["violation_prob"] = viol[static_cast<size_t>(tr)];
        jt["dist"] = dist_json(p.dist[static_cast<size_t>(tr)]);
        jn[tr_name(tr)] = std::move(jt);
        write_tsv_file(p.dist[static_cast<size_t>(tr)],
                       fs::path(o.out_dir) /
                           ("dist_" + name + "_" + tr_file_tag(tr) + ".tsv"));
      }
      const DelayDist total = res.total_dist(out);
      jn["total"] = dist_json(total);
      write_tsv_file(total,
                     fs::path(o.out_dir) / ("dist_" + name + "_total.tsv"));
      jo[name] = std::move(jn);
    }
  });
  j["outputs"] = std::move(jo);
  std::ofstream(fs::path(o.out_dir) / "analysis.json") << j.dump(1) << "\n";
  manifest.write((fs::path(o.out_dir) / "manifest.json").string());
  std::cout << "analyze: " << res.outputs().size() << " outputs -> "
            << o.out_dir << " (" << manifest.phase_ms("analyze") << " ms)\n";
  return 0;
}

int cmd_mc(const CommonOpts& o, uint64_t samples, uint64_t seed,
           const std::string& output, const std::string& word,
           const std::string& semantics, int threads) {
  if (samples < 1) throw usage_error("mc: --samples must be >= 1");
  RunManifest manifest("mc");
  const Loaded l = load_common(o, manifest);
  manifest.param("samples", samples);
  manifest.param("seed", seed);
  manifest.param("semantics", semantics);
  manifest.param("threads", static_cast<int64_t>(threads));

  McConfig mc;
  mc.n_samples = samples;
  mc.seed = seed;
  mc.vdd = o.vdd;
  mc.t_clk_ps = o.t_clk;
  mc.grid = l.grid;
  mc.semantics = parse_semantics(semantics);
  mc.threads = threads;

  std::vector<std::string> nets;
  if (!output.empty()) {
    nets.push_back(output);
  } else {
    for (NetId id : l.netlist.primary_outputs())
      nets.push_back(l.netlist.net_name(id));
  }
  nlohmann::json counts = nlohmann::json::object();
  manifest.phase("mc_histograms", [&] {
    for (const std::string& net : nets) {
      const McHistogram h =
          mc_histogram(l.netlist, l.lib, InputModel::uniform(), mc, net);
      write_tsv_file(h.dist, fs::path(o.out_dir) / ("mc_hist_" + net + ".tsv"));
      nlohmann::json jc;
      for (int tr = 0; tr < 4; ++tr)
        jc[tr_name(tr)] = h.transition_counts[static_cast<size_t>(tr)];
      counts[net] = std::move(jc);
    }
  });
  if (!word.empty()) {
    manifest.phase("mc_latched", [&] {
      const auto rows =
          mc_latched_outputs(l.netlist, l.lib, InputModel::uniform(), mc, word);
      std::ofstream out(fs::path(o.out_dir) / ("latched_" + word + ".csv"));
      out << "sample,ideal,latched\n";
      for (size_t i = 0; i < rows.size(); ++i)
        out << i << ',' << rows[i].ideal << ',' << rows[i].latched << '\n';
    });
  }
  nlohmann::json j;
  j["samples"] = samples;
  j["seed"] = seed;
  j["transition_counts"] = std::move(counts);
  std::ofstream(fs::path(o.out_dir) / "mc_summary.json") << j.dump(1) << "\n";
  manifest.write((fs::path(o.out_dir) / "manifest.json").string());
  std::cout << "mc: " << samples << " samples -> " << o.out_dir << " ("
            << manifest.phase_ms("mc_histograms") << " ms)\n";
  return 0;
}

int cmd_errtable(const CommonOpts& o, const std::string& word, int64_t initial,
                 int64_t final, const std::string& conditioning,
                 const std::string& prev_bits, const std::string& next_bits,
                 const std::string& corr) {
  RunManifest manifest("errtable");
  const Loaded l = load_common(o, manifest);
  manifest.param("word", word);
  manifest.param("initial", initial);
  manifest.param("final", final);

  const bool stimulus_given = !prev_bits.empty() || !next_bits.empty();
  std::string mode = conditioning;
  if (mode == "auto") mode = stimulus_given ? "stimulus" : "marginal";
  if (mode == "stimulus" && !stimulus_given)
    throw usage_error("errtable: stimulus conditioning needs --prev/--next");
  if (mode != "stimulus" && mode != "marginal")
    throw usage_error("errtable: unknown conditioning '" + mode + "'");
  manifest.param("conditioning", mode);

  InputModel im = InputModel::uniform();
  if (mode == "stimulus") {
    const auto k = static_cast<int>(l.netlist.primary_inputs().size());
    // bit strings are written in declared input order, first input first
    const uint64_t p = bits_from_string(prev_bits, k);
    const uint64_t nx = bits_from_string(next_bits, k);
    uint64_t pr = 0, nr = 0;
    for (int i = 0; i < k; ++i) {
      pr |= ((p >> (k - 1 - i)) & 1u) << i;
      nr |= ((nx >> (k - 1 - i)) & 1u) << i;
    }
    im = InputModel::pinned(l.netlist, pr, nr);
  }

  AnalyzeOptions opts;
  opts.vdd = o.vdd;
  opts.grid = l.grid;
  opts.corr = parse_corr(corr);
  const AnalysisResult res =
      manifest.phase("analyze", [&] { return analyze(l.netlist, l.lib, im, opts); });
  const ErrorPMF pmf = make_error_pmf(res, word, initial, final, o.t_clk);

  InjectorTable table(word, o.t_clk, o.vdd);
  table.put(pmf);
  {
    std::ofstream out(fs::path(o.out_dir) /
                      ("errpmf_" + word + "_" + std::to_string(initial) + "_" +
                       std::to_string(final) + ".csv"));
    write_error_pmf_csv(pmf, out);
  }
  {
    std::ofstream out(fs::path(o.out_dir) / ("injector_" + word + ".json"));
    table.write_json(out);
  }
  manifest.write((fs::path(o.out_dir) / "manifest.json").string());
  std::cout << "errtable: " << word << " " << initial << "->" << final << ", "
            << pmf.pmf.size() << " magnitudes -> " << o.out_dir << "\n";
  return 0;
}

int cmd_demo(const CommonOpts& o, const std::string& image,
             const std::string& mode, const std::string& conditioning,
             uint64_t seed, int quant_shift, const std::string& semantics,
             int threads) {
  RunManifest manifest("demo");
  const Loaded l = load_common(o, manifest);
  const std::string ip = resolve(image);
  manifest.input_file("image", ip);
  manifest.param("mode", mode);
  manifest.param("seed", seed);
  manifest.param("quant_shift", static_cast<int64_t>(quant_shift));
  manifest.param("conditioning", conditioning);

  PipelineConfig pc;
  pc.vdd = o.vdd;
  pc.t_clk_ps = o.t_clk;
  pc.quant_shift = quant_shift;
  pc.seed = seed;
  pc.grid = l.grid;
  pc.mc_semantics = parse_semantics(semantics);
  pc.threads = threads;
  if (mode == "clean") pc.mode = DemoMode::clean;
  else if (mode == "analytical-inject") pc.mode = DemoMode::analytical_inject;
  else if (mode == "mc-latched") pc.mode = DemoMode::mc_latched;
  else throw usage_error("unknown demo mode '" + mode + "'");
  if (conditioning == "marginal") pc.conditioning = Conditioning::marginal;
  else if (conditioning == "word") pc.conditioning = Conditioning::word_transition;
  else throw usage_error("unknown conditioning '" + conditioning + "'");

  const ImageGray img = read_pgm_file(ip);
  const DemoResult r = manifest.phase(
      "pipeline", [&] { return run_pipeline(img, l.netlist, l.lib, pc); });
  write_pgm_file(r.reconstructed, (fs::path(o.out_dir) / "out.pgm").string());

  nlohmann::json j;
  j["mode"] = mode;
  j["vdd"] = o.vdd;
  j["t_clk_ps"] = o.t_clk;
  j["seed"] = seed;
  j["quant_shift"] = quant_shift;
  j["psnr_infinite"] = std::isinf(r.psnr_db);
  if (std::isinf(r.psnr_db))
    j["psnr_db"] = nullptr;
  else
    j["psnr_db"] = r.psnr_db;
  j["runtime_ms"] = {{"analysis", r.analysis_ms}, {"pipeline", r.pipeline_ms}};
  std::ofstream(fs::path(o.out_dir) / "report.json") << j.dump(1) << "\n";
  manifest.write((fs::path(o.out_dir) / "manifest.json").string());
  if (std::isinf(r.psnr_db))
    std::cout << "demo: PSNR = inf (lossless) -> " << o.out_dir << "\n";
  else
    std::cout << "demo: PSNR = " << r.psnr_db << " dB -> " << o.out_dir << "\n";
  return 0;
}

int cmd_synthlib(const std::string& nominal_path, const std::string& voltages,
                 double vth, double alpha_exp, const std::string& out_path) {
  const CharLib nominal = load_charlib_file(resolve(nominal_path));
  std::vector<double> vs;
  std::stringstream ss(voltages);
  std::string tok;
  while (std::getline(ss, tok, ',')) vs.push_back(std::stod(tok));
  if (vs.empty()) throw usage_error("synthlib: no voltages given");
  const CharLib lib = synth_charlib(nominal, vs, vth, alpha_exp);
  save_charlib_file(lib, out_path);
  std::cout << "synthlib: " << vs.size() << " voltages -> " << out_path << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"state-dependent timing-error analysis for voltage-overscaled "
               "combinational logic"};
  app.require_subcommand(1);

  CommonOpts ao;
  std::string corr = "auto";
  auto* analyze_cmd =
      app.add_subcommand("analyze", "analytical transition delay profiles");
  add_common(analyze_cmd, ao);
  analyze_cmd->add_option("--corr", corr,
                          "joint weighting: auto|independent|exact");

  CommonOpts mo;
  uint64_t samples = 100000, seed = 1;
  std::string output, word, semantics = "inertial";
  int threads = 1;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo dynamic timing");
  add_common(mc_cmd, mo);
  mc_cmd->add_option("--samples", samples, "number of vector pairs");
  mc_cmd->add_option("--seed", seed, "random seed");
  mc_cmd->add_option("--output", output, "histogram net (default: all outputs)");
  mc_cmd->add_option("--word", word, "also dump latched values of this word");
  mc_cmd->add_option("--semantics", semantics, "inertial|transport");
  mc_cmd->add_option("--threads", threads, "worker threads");

  CommonOpts eo;
  std::string eword, econd = "auto", eprev, enext, ecorr = "auto";
  int64_t initial = 0, final_v = 0;
  auto* err_cmd = app.add_subcommand(
      "errtable", "error-magnitude PMF for a word transition");
  add_common(err_cmd, eo);
  err_cmd->add_option("--word", eword, "output word name")->required();
  err_cmd->add_option("--initial", initial, "initial word value")->required();
  err_cmd->add_option("--final", final_v, "final word value")->required();
  err_cmd->add_option("--conditioning", econd, "auto|marginal|stimulus");
  err_cmd->add_option("--prev", eprev,
                      "previous input bits (declared order, first input first)");
  err_cmd->add_option("--next", enext, "next input bits");
  err_cmd->add_option("--corr", ecorr, "joint weighting: auto|independent|exact");

  CommonOpts dmo;
  std::string image, dmode = "clean", dcond = "word", dsem = "inertial";
  uint64_t dseed = 1;
  int dshift = 0, dthreads = 1;
  auto* demo_cmd =
      app.add_subcommand("demo", "2-point transform image pipeline");
  add_common(demo_cmd, dmo);
  demo_cmd->add_option("--image", image, "input PGM image")->required();
  demo_cmd->add_option("--mode", dmode, "clean|analytical-inject|mc-latched");
  demo_cmd->add_option("--conditioning", dcond, "marginal|word");
  demo_cmd->add_option("--seed", dseed, "random seed");
  demo_cmd->add_option("--quant-shift", dshift, "quantization right-shift [0,7]");
  demo_cmd->add_option("--semantics", dsem, "inertial|transport");
  demo_cmd->add_option("--threads", dthreads, "worker threads");

  std::string nominal, volts = "1.0,0.9,0.8,0.7", sout = "charlib_synth.csv";
  double svth = 0.3, salpha = 1.3;
  auto* synth_cmd =
      app.add_subcommand("synthlib", "synthesize a multi-voltage table");
  synth_cmd->add_option("--nominal", nominal, "nominal 1.0 V CSV")->required();
  synth_cmd->add_option("--voltages", volts, "comma-separated voltages");
  synth_cmd->add_option("--vth", svth, "threshold voltage (V)");
  synth_cmd->add_option("--alpha", salpha, "scaling exponent");
  synth_cmd->add_option("--out", sout, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(analyze_cmd)) return cmd_analyze(ao, corr);
    if (app.got_subcommand(mc_cmd))
      return cmd_mc(mo, samples, seed, output, word, semantics, threads);
    if (app.got_subcommand(err_cmd))
      return cmd_errtable(eo, eword, initial, final_v, econd, eprev, enext,
                          ecorr);
    if (app.got_subcommand(demo_cmd))
      return cmd_demo(dmo, image, dmode, dcond, dseed, dshift, dsem, dthreads);
    if (app.got_subcommand(synth_cmd))
      return cmd_synthlib(nominal, volts, svth, salpha, sout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 1;
}
