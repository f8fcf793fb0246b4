#ifndef DIOPH_ERRORS_HPP
#define DIOPH_ERRORS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace dioph {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value could not be certified within the available or permitted precision.
// `height` is set when the failure happened while scanning a shell.
class PrecisionExhausted : public Error {
 public:
  explicit PrecisionExhausted(const std::string& what,
                              std::optional<std::int64_t> height = std::nullopt)
      : Error(what), height_(height) {}

  [[nodiscard]] std::optional<std::int64_t> height() const { return height_; }

 private:
  std::optional<std::int64_t> height_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class DegreeTooLow : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

}  // namespace dioph

#endif  // DIOPH_ERRORS_HPP
