#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wassdict {

// Malformed, missing or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A syntax or invariant violation at a known line of a text file.
class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message)
      : DataError(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Non-finite energies or a solver that cannot make progress.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wassdict
