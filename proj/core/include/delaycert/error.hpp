#pragma once

#include <stdexcept>
#include <string>

namespace delaycert {

// Base class for every error raised by the library. The `code()` string is
// stable and is what reports and the CLI print as a reason code.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Invalid input data: wrong dimensions, out-of-range parameters, bad files.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("ConfigError", message) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& message) : Error("DimensionError", message) {}
};

// exp(p*theta) leaves the double exponent range.
class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& message) : Error("Overflow", message) {}
};

// alpha(p) - pI is numerically singular: p is (close to) a characteristic root.
class SingularAtP : public Error {
 public:
  SingularAtP(const std::string& message, double rcond)
      : Error("SingularAtP", message), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

class RootOnLine : public Error {
 public:
  RootOnLine(const std::string& message, double imag_part)
      : Error("RootOnLine", message), imag_part_(imag_part) {}
  // Imaginary part of the detected (near-)root on the vertical line.
  double imag_part() const noexcept { return imag_part_; }

 private:
  double imag_part_;
};

class NonIntegerWinding : public Error {
 public:
  NonIntegerWinding(const std::string& message, double residual)
      : Error("NonIntegerWinding", message), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class TailUnbounded : public Error {
 public:
  explicit TailUnbounded(const std::string& message) : Error("TailUnbounded", message) {}
};

// Requested frequency cap is below the range where the Neumann bound holds.
class OmegaTooSmall : public Error {
 public:
  OmegaTooSmall(const std::string& message, double minimal_omega)
      : Error("OmegaTooSmall", message), minimal_omega_(minimal_omega) {}
  double minimal_omega() const noexcept { return minimal_omega_; }

 private:
  double minimal_omega_;
};

class NonFiniteState : public Error {
 public:
  NonFiniteState(const std::string& message, double blowup_time)
      : Error("NonFiniteState", message), blowup_time_(blowup_time) {}
  double blowup_time() const noexcept { return blowup_time_; }

 private:
  double blowup_time_;
};

class DifferenceUnderflow : public Error {
 public:
  DifferenceUnderflow(const std::string& message, double merge_time)
      : Error("DifferenceUnderflow", message), merge_time_(merge_time) {}
  double merge_time() const noexcept { return merge_time_; }

 private:
  double merge_time_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t offset)
      : Error("SyntaxError", message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& message) : Error("EvaluationError", message) {}
};

}  // namespace delaycert
