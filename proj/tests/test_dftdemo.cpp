#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "vost/dftdemo.hpp"

using namespace vost;
using vost::test::default_lib;
using vost::test::fixture;

namespace {

const GridConfig cfg = GridConfig::make(0.5, 400.0);

ImageGray tiny_image(int w, int h, uint64_t seed) {
  ImageGray img;
  img.width = w;
  img.height = h;
  img.data.resize(static_cast<size_t>(w) * static_cast<size_t>(h));
  Rng rng(seed);
  for (auto& px : img.data) px = static_cast<uint8_t>(rng.next() % 256);
  return img;
}

} // namespace

TEST_CASE("pgm: binary round trip is byte-exact, ascii reads too") {
  const ImageGray img = read_pgm_file(fixture("sample_128.pgm"));
  CHECK(img.width == 128);
  CHECK(img.height == 128);

  std::ostringstream out;
  write_pgm(img, out);
  std::istringstream in(out.str());
  CHECK(read_pgm(in) == img);

  std::istringstream ascii("P2\n# comment\n2 2\n255\n0 128\n255 7\n");
  const ImageGray a = read_pgm(ascii);
  CHECK(a.at(1, 0) == 128);
  CHECK(a.at(1, 1) == 7);

  std::istringstream bad("P3\n2 2\n255\n0 0 0 0\n");
  CHECK_THROWS_AS(read_pgm(bad), Error);
  std::istringstream trunc("P5\n4 4\n255\nxy");
  CHECK_THROWS_AS(read_pgm(trunc), Error);
}

TEST_CASE("psnr closed forms") {
  const ImageGray a = tiny_image(10, 10, 1);
  CHECK(std::isinf(psnr(a, a)));

  // uniform difference of 16: 20*log10(255/16) = 24.0484 dB
  ImageGray lo = a, hi = a;
  for (size_t i = 0; i < a.data.size(); ++i) {
    lo.data[i] = 100;
    hi.data[i] = 116;
  }
  CHECK(psnr(lo, hi) == doctest::Approx(24.04840).epsilon(1e-4));

  // one full-scale pixel among 100: 10*log10(255^2*100/255^2) = 20 dB
  ImageGray c = lo, d = lo;
  c.data[37] = 0;
  d.data[37] = 255;
  CHECK(psnr(c, d) == doctest::Approx(20.0).epsilon(1e-6));

  const ImageGray wrong = tiny_image(9, 10, 2);
  CHECK_THROWS_AS(psnr(a, wrong), Error);
}

TEST_CASE("transform pair: closed forms and exhaustive inversion") {
  CHECK(dft2(5, 3) == std::pair<int64_t, int64_t>{8, 2});
  CHECK(dft2(0, 0) == std::pair<int64_t, int64_t>{0, 0});
  CHECK(dft2(255, 255) == std::pair<int64_t, int64_t>{510, 0});
  CHECK(idft2(8, 2) == std::pair<int64_t, int64_t>{5, 3});
  CHECK_THROWS_AS(dft2(256, 0), Error);
  CHECK_THROWS_AS(dft2(-1, 0), Error);

  for (int a = 0; a < 256; ++a)
    for (int b = 0; b < 256; ++b) {
      const auto [s, d] = dft2(a, b);
      const auto [ra, rb] = idft2(s, d);
      REQUIRE(ra == a);
      REQUIRE(rb == b);
    }
}

TEST_CASE("parity-breaking errors round half away from zero") {
  CHECK(idft2(24, 1) == std::pair<int64_t, int64_t>{13, 12});
  CHECK(idft2(-24, -1) == std::pair<int64_t, int64_t>{-13, -12});
  CHECK(idft2(3, 0) == std::pair<int64_t, int64_t>{2, 2});
}

TEST_CASE("clean mode is lossless at zero quantization") {
  const Netlist n = parse_netlist_file(fixture("dft2.json"));
  const CharLib lib = default_lib();
  const ImageGray img = tiny_image(16, 8, 3);
  PipelineConfig pc;
  pc.mode = DemoMode::clean;
  pc.grid = cfg;
  const DemoResult r = run_pipeline(img, n, lib, pc);
  CHECK(r.reconstructed == img);
  CHECK(std::isinf(r.psnr_db));
}

TEST_CASE("clean mode with quantization loses only quantized bits") {
  const Netlist n = parse_netlist_file(fixture("dft2.json"));
  const CharLib lib = default_lib();
  const ImageGray img = tiny_image(16, 8, 4);
  PipelineConfig pc;
  pc.mode = DemoMode::clean;
  pc.quant_shift = 3;
  pc.grid = cfg;
  const DemoResult r = run_pipeline(img, n, lib, pc);
  for (size_t i = 0; i < img.data.size(); ++i)
    CHECK((r.reconstructed.data[i] >> 3) == (img.data[i] >> 3));
}

TEST_CASE("relaxed clock makes injection a no-op") {
  const Netlist n = parse_netlist_file(fixture("dft2.json"));
  const CharLib lib = default_lib();
  const ImageGray img = tiny_image(16, 8, 5);
  PipelineConfig pc;
  pc.mode = DemoMode::analytical_inject;
  pc.conditioning = Conditioning::marginal;
  pc.vdd = 0.7;
  pc.t_clk_ps = cfg.t_max();
  pc.grid = cfg;
  const DemoResult r = run_pipeline(img, n, lib, pc);
  CHECK(r.reconstructed == img);
  CHECK(std::isinf(r.psnr_db));
}

TEST_CASE("injected runs are deterministic per seed and degrade with voltage") {
  const Netlist n = parse_netlist_file(fixture("dft2.json"));
  const CharLib lib = default_lib({1.0, 0.9, 0.8, 0.7});
  const ImageGray img = read_pgm_file(fixture("sample_128.pgm"));
  PipelineConfig pc;
  pc.mode = DemoMode::analytical_inject;
  pc.conditioning = Conditioning::marginal;
  pc.t_clk_ps = 55.0;
  pc.seed = 11;
  pc.grid = cfg;

  pc.vdd = 0.8;
  const DemoResult a = run_pipeline(img, n, lib, pc);
  const DemoResult b = run_pipeline(img, n, lib, pc);
  CHECK(a.reconstructed == b.reconstructed);

  pc.threads = 4;
  const DemoResult c = run_pipeline(img, n, lib, pc);
  CHECK(a.reconstructed == c.reconstructed);

  pc.threads = 1;
  pc.vdd = 0.9;
  const DemoResult hi = run_pipeline(img, n, lib, pc);
  CHECK(hi.psnr_db >= a.psnr_db);
}

TEST_CASE("latched mode runs deterministically") {
  const Netlist n = parse_netlist_file(fixture("dft2.json"));
  const CharLib lib = default_lib();
  const ImageGray img = tiny_image(32, 8, 6);
  PipelineConfig pc;
  pc.mode = DemoMode::mc_latched;
  pc.vdd = 0.7;
  pc.t_clk_ps = 55.0;
  pc.seed = 3;
  pc.grid = cfg;
  const DemoResult a = run_pipeline(img, n, lib, pc);
  const DemoResult b = run_pipeline(img, n, lib, pc);
  CHECK(a.reconstructed == b.reconstructed);
  pc.threads = 3;
  const DemoResult c = run_pipeline(img, n, lib, pc);
  CHECK(a.reconstructed == c.reconstructed);
  // a tight clock at scaled voltage must corrupt something
  CHECK(!std::isinf(a.psnr_db));
}

TEST_CASE("odd trailing pixel passes through") {
  const Netlist n = parse_netlist_file(fixture("dft2.json"));
  const CharLib lib = default_lib();
  ImageGray img = tiny_image(5, 3, 7);
  PipelineConfig pc;
  pc.mode = DemoMode::clean;
  pc.quant_shift = 2;
  pc.grid = cfg;
  const DemoResult r = run_pipeline(img, n, lib, pc);
  for (int y = 0; y < 3; ++y)
    CHECK(r.reconstructed.at(4, y) == img.at(4, y));
}

TEST_CASE("the two error paths agree at the reference operating point") {
  // analytical injection versus Monte Carlo latching, 0.7 V / 100 ps
  const Netlist n = parse_netlist_file(fixture("dft2.json"));
  const CharLib lib = default_lib();
  const ImageGray img = read_pgm_file(fixture("sample_128.pgm"));
  PipelineConfig pc;
  pc.vdd = 0.7;
  pc.t_clk_ps = 100.0;
  pc.seed = 29;
  pc.grid = cfg;
  pc.threads = 4;
  pc.mode = DemoMode::analytical_inject;
  const DemoResult ana = run_pipeline(img, n, lib, pc);
  pc.mode = DemoMode::mc_latched;
  const DemoResult mc = run_pipeline(img, n, lib, pc);
  CHECK(!std::isinf(ana.psnr_db));
  CHECK(std::abs(ana.psnr_db - mc.psnr_db) < 1.5);
}

TEST_CASE("word-conditioned injection runs on a small image") {
  const Netlist n = parse_netlist_file(fixture("dft2.json"));
  const CharLib lib = default_lib();
  const ImageGray img = tiny_image(8, 4, 9);
  PipelineConfig pc;
  pc.vdd = 0.7;
  pc.t_clk_ps = 80.0;
  pc.mode = DemoMode::analytical_inject;
  pc.conditioning = Conditioning::word_transition;
  pc.seed = 5;
  pc.grid = cfg;
  const DemoResult a = run_pipeline(img, n, lib, pc);
  const DemoResult b = run_pipeline(img, n, lib, pc);
  CHECK(a.reconstructed == b.reconstructed);
}

TEST_CASE("quantization shift is validated") {
  const Netlist n = parse_netlist_file(fixture("dft2.json"));
  const CharLib lib = default_lib();
  const ImageGray img = tiny_image(4, 2, 8);
  PipelineConfig pc;
  pc.quant_shift = 9;
  pc.grid = cfg;
  CHECK_THROWS_AS(run_pipeline(img, n, lib, pc), Error);
}
