#pragma once

#include <cmath>
#include <cstdint>

namespace vost {

//! Small deterministic generator (splitmix64). Every sampling site derives
//! its own stream from (seed, stream id), so results do not depend on how
//! work is partitioned across threads.
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  static Rng stream(uint64_t seed, uint64_t stream_id) {
    // decorrelate the stream id before mixing it into the seed
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1)));
    r.next();
    return r;
  }

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  //! Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  //! Standard normal via Box-Muller; the second variate of each pair is
  //! cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

private:
  uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

} // namespace vost
