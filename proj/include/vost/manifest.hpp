#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vost {

//! Reproducibility record written next to every CLI artifact: the command,
//! every resolved parameter, input-file hashes and per-phase wall times.
class RunManifest {
public:
  explicit RunManifest(std::string command) : command_(std::move(command)) {}

  void param(const std::string& key, const std::string& value) {
    params_[key] = value;
  }
  void param(const std::string& key, double value);
  void param(const std::string& key, int64_t value) {
    params_[key] = std::to_string(value);
  }
  void param(const std::string& key, uint64_t value) {
    params_[key] = std::to_string(value);
  }

  //! Record a file dependency with its content hash.
  void input_file(const std::string& role, const std::string& path);

  //! Time a phase and record its duration.
  template <typename Fn>
  auto phase(const std::string& name, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      add_phase(name, t0);
    } else {
      auto r = fn();
      add_phase(name, t0);
      return r;
    }
  }

  double phase_ms(const std::string& name) const;

  std::string to_json() const;
  void write(const std::string& path) const;

private:
  void add_phase(const std::string& name,
                 std::chrono::steady_clock::time_point t0);

  std::string command_;
  std::map<std::string, std::string> params_;
  std::vector<std::pair<std::string, std::string>> files_; // role, path@hash
  std::vector<std::pair<std::string, double>> phases_;
};

//! FNV-1a 64-bit hash of a file's bytes, as hex.
std::string file_hash_hex(const std::string& path);

} // namespace vost
