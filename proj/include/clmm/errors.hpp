#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clmm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rate or tick index outside the price grid.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// Liquidity position whose token cost per unit of liquidity is not positive.
class DegeneratePositionError : public Error {
 public:
  using Error::Error;
};

// Swap larger than the pool can absorb. Carries the largest executable
// amount of token B in the direction of the request.
class PartialFillError : public Error {
 public:
  PartialFillError(double requested, double executable)
      : Error("swap of " + std::to_string(requested) +
              " token B exceeds pool capacity " + std::to_string(executable)),
        requested_(requested),
        executable_(executable) {}

  double requested() const noexcept { return requested_; }
  double executable() const noexcept { return executable_; }

 private:
  double requested_;
  double executable_;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace clmm
