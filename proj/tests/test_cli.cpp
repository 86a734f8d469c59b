#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* b = std::getenv("VOST_BIN");
  REQUIRE(b != nullptr);
  return b;
}

std::string fixture(const std::string& name) {
  return std::string(VOST_FIXTURE_DIR) + "/" + name;
}

int run(const std::string& args) {
  const std::string cmd = bin() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path temp_dir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("vost_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const std::string common = " --charlib " + fixture("charlib_nominal_1v.csv") +
                           " --vdd 0.7 --tclk 100";

} // namespace

TEST_CASE("analyze writes the four transition dumps and a manifest") {
  const fs::path out = temp_dir("analyze");
  CHECK(run("analyze --netlist " + fixture("fig1_xor2.json") + common +
            " --out " + out.string()) == 0);
  for (const char* tag : {"0to0", "0to1", "1to0", "1to1", "total"})
    CHECK(fs::exists(out / (std::string("dist_Y2_") + tag + ".tsv")));
  CHECK(fs::exists(out / "analysis.json"));
  CHECK(fs::exists(out / "manifest.json"));
  const std::string manifest = slurp(out / "manifest.json");
  CHECK(manifest.find("netlist") != std::string::npos);
  CHECK(manifest.find("runtime_ms") != std::string::npos);
}

TEST_CASE("exit codes: parse, incomplete library, numeric, usage") {
  const fs::path out = temp_dir("codes");
  const fs::path bad_json = out / "bad.json";
  std::ofstream(bad_json) << "{ not json";
  CHECK(run("analyze --netlist " + bad_json.string() + common + " --out " +
            out.string()) == 2);

  const fs::path partial = out / "partial.csv";
  std::ofstream(partial) << "gate,prev,next,vdd,mu_ps,sigma_ps\n"
                            "NOT,1,0,1.00,6.5,1.2\n";
  CHECK(run("analyze --netlist " + fixture("fig1_xor2.json") + " --charlib " +
            partial.string() + " --vdd 1.0 --out " + out.string()) == 3);

  // voltage below the scaling-law threshold is a numeric error
  CHECK(run("analyze --netlist " + fixture("fig1_xor2.json") + " --charlib " +
            fixture("charlib_nominal_1v.csv") + " --vdd 0.2 --out " +
            out.string()) == 4);

  // zero samples is a usage error
  CHECK(run("mc --netlist " + fixture("fig1_xor2.json") + common +
            " --samples 0 --out " + out.string()) == 1);
  // unknown flag is a usage error
  CHECK(run("analyze --bogus") == 1);
}

TEST_CASE("mc runs are byte-identical for a fixed seed") {
  const fs::path out1 = temp_dir("mc1");
  const fs::path out2 = temp_dir("mc2");
  const std::string args = "mc --netlist " + fixture("fig1_xor2.json") +
                           common + " --samples 20000 --seed 11 --output Y2";
  CHECK(run(args + " --out " + out1.string()) == 0);
  CHECK(run(args + " --threads 4 --out " + out2.string()) == 0);
  CHECK(slurp(out1 / "mc_hist_Y2.tsv") == slurp(out2 / "mc_hist_Y2.tsv"));
  CHECK(slurp(out1 / "mc_summary.json") == slurp(out2 / "mc_summary.json"));
}

TEST_CASE("mc latched dump has the declared format") {
  const fs::path out = temp_dir("latched");
  CHECK(run("mc --netlist " + fixture("adder2.json") + common +
            " --samples 50 --seed 2 --word sum --out " + out.string()) == 0);
  std::ifstream in(out / "latched_sum.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "sample,ideal,latched");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 50);
}

TEST_CASE("errtable emits only the magnitudes the transition can produce") {
  const fs::path out = temp_dir("errtable");
  CHECK(run("errtable --netlist " + fixture("adder4.json") +
            " --charlib " + fixture("charlib_nominal_1v.csv") +
            " --vdd 0.45 --tclk 100 --word sum --initial 16 --final 0" +
            " --prev 000100010 --next 000000000 --out " + out.string()) == 0);
  std::ifstream in(out / "errpmf_sum_16_0.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "magnitude,probability");
  int rows = 0;
  while (std::getline(in, line)) {
    const auto mag = std::stoll(line.substr(0, line.find(',')));
    CHECK((mag == 0 || mag == 16));
    ++rows;
  }
  CHECK(rows == 2);
  CHECK(fs::exists(out / "injector_sum.json"));
}

TEST_CASE("demo clean mode reports the lossless sentinel") {
  const fs::path out = temp_dir("demo");
  CHECK(run("demo --netlist " + fixture("dft2.json") + common + " --image " +
            fixture("sample_128.pgm") + " --mode clean --out " +
            out.string()) == 0);
  const std::string report = slurp(out / "report.json");
  CHECK(report.find("\"psnr_infinite\": true") != std::string::npos);
  CHECK(report.find("\"psnr_db\": null") != std::string::npos);
  CHECK(fs::exists(out / "out.pgm"));
  CHECK(slurp(out / "out.pgm") == slurp(fixture("sample_128.pgm")));
}

TEST_CASE("synthlib output loads and serves the requested voltages") {
  const fs::path out = temp_dir("synth");
  const fs::path csv = out / "synth.csv";
  CHECK(run("synthlib --nominal " + fixture("charlib_nominal_1v.csv") +
            " --voltages 0.9,0.7 --out " + csv.string()) == 0);
  CHECK(run("analyze --netlist " + fixture("fig1_xor2.json") + " --charlib " +
            csv.string() + " --vdd 0.8 --out " + out.string()) == 0);
}
