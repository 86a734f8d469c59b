#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "vost/errmodel.hpp"
#include "vost/image.hpp"
#include "vost/mcdta.hpp"

namespace vost {

enum class DemoMode { clean, analytical_inject, mc_latched };

//! Which analysis feeds the injector PMFs: the stationary uniform-input
//! profiles, or a per-context analysis with the inputs pinned to a canonical
//! stimulus realizing that word transition.
enum class Conditioning { marginal, word_transition };

struct PipelineConfig {
  double vdd = 0.7;
  double t_clk_ps = 100.0;
  int quant_shift = 0; // right-shift quantization, [0, 7]
  DemoMode mode = DemoMode::clean;
  Conditioning conditioning = Conditioning::word_transition;
  uint64_t seed = 1;
  GridConfig grid{};
  EventSemantics mc_semantics = EventSemantics::reevaluate;
  int threads = 1;
};

//! Functional 2-point transform: (a, b) -> (a+b, a-b). Throws when a value
//! does not fit the fixture's 9-bit words.
std::pair<int64_t, int64_t> dft2(int64_t a, int64_t b);

//! Inverse transform with half-away-from-zero rounding when injected errors
//! break the parity of s+d.
std::pair<int64_t, int64_t> idft2(int64_t s, int64_t d);

struct DemoResult {
  ImageGray reconstructed;
  double psnr_db = 0.0; // +inf for a lossless run
  double analysis_ms = 0.0;
  double pipeline_ms = 0.0;
};

//! Image -> quantize -> 2-point DFT per adjacent pixel pair -> (optional
//! error injection or Monte Carlo latching through the gate-level netlist)
//! -> inverse DFT -> dequantize -> PSNR against the original.
//!
//! Pairs are consumed row-major within each row; a trailing pixel of an
//! odd-width row passes through untouched. Word streams restart per row
//! (previous value 0) so row-parallel runs are deterministic.
DemoResult run_pipeline(const ImageGray& img, const Netlist& dft_netlist,
                        const CharLib& lib, const PipelineConfig& cfg);

} // namespace vost
