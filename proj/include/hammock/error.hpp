#pragma once

#include <stdexcept>
#include <string>

namespace hammock {

// Maps onto the CLI exit codes: usage = 1, data = 2, render = 3.
enum class ErrorKind { usage = 1, data = 2, render = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& cause)
      : std::runtime_error(module + ": " + cause),
        kind_(kind),
        module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

inline Error data_error(std::string module, const std::string& cause) {
  return Error(ErrorKind::data, std::move(module), cause);
}

inline Error usage_error(const std::string& cause) {
  return Error(ErrorKind::usage, "cli", cause);
}

inline Error render_error(const std::string& cause) {
  return Error(ErrorKind::render, "render", cause);
}

}  // namespace hammock
