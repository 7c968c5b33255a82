#pragma once

#include <stdexcept>
#include <string>

namespace coinroute {

enum class ErrorKind {
  Domain,      // argument outside the mathematical domain (negative load, bad k)
  Config,      // unknown benchmark, malformed experiment file, bad option value
  Routing,     // missing decision, illegal next hop, empty training store
  Parse,       // malformed network text
  Io,          // file could not be opened or written
  State,       // operation invalid for the current object state
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace coinroute
