#include "vost/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vost/errors.hpp"

namespace vost {

void RunManifest::param(const std::string& key, double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  params_[key] = os.str();
}

void RunManifest::input_file(const std::string& role, const std::string& path) {
  files_.emplace_back(role, path + "@" + file_hash_hex(path));
}

void RunManifest::add_phase(const std::string& name,
                            std::chrono::steady_clock::time_point t0) {
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  phases_.emplace_back(name, ms);
}

double RunManifest::phase_ms(const std::string& name) const {
  for (const auto& [n, ms] : phases_)
    if (n == name) return ms;
  return 0.0;
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command_;
  j["params"] = params_;
  nlohmann::json jf = nlohmann::json::object();
  for (const auto& [role, ph] : files_) jf[role] = ph;
  j["inputs"] = std::move(jf);
  nlohmann::json jp = nlohmann::json::object();
  for (const auto& [name, ms] : phases_) jp[name] = ms;
  j["runtime_ms"] = std::move(jp);
  return j.dump(1) + "\n";
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write manifest '" + path + "'");
  out << to_json();
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot hash missing file '" + path + "'");
  uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

} // namespace vost
