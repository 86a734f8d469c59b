#pragma once

#include <stdexcept>
#include <string>

namespace vost {

// Coarse failure classes; the CLI maps them onto process exit codes.
enum class ErrorKind {
  parse,              // malformed input file
  incomplete_library, // characterization table missing required entries
  numeric,            // domain errors: grids, voltages, ranges
  usage,              // bad arguments / unknown names
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline Error parse_error(const std::string& msg) {
  return Error(ErrorKind::parse, msg);
}
inline Error numeric_error(const std::string& msg) {
  return Error(ErrorKind::numeric, msg);
}
inline Error usage_error(const std::string& msg) {
  return Error(ErrorKind::usage, msg);
}

} // namespace vost
