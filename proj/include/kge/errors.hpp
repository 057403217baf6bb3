#pragma once

#include <stdexcept>
#include <string>

namespace kge {

/// Malformed input text (bad field count, unknown label, ...).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid data or configuration (bad sizes, unknown config key, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An entity or relation that the model has never seen.
class UnknownSymbolError : public DataError {
 public:
  explicit UnknownSymbolError(const std::string& symbol)
      : DataError("unknown symbol: " + symbol), symbol_(symbol) {}

  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::string symbol_;
};

/// Non-finite values reached the parameters or a computation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kge
