#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpnia {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MatchingError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::size_t requested, std::size_t remaining)
      : Error("injection needs " + std::to_string(requested) +
              " budgeted links but only " + std::to_string(remaining) + " remain"),
        requested_(requested),
        remaining_(remaining) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t remaining() const noexcept { return remaining_; }

 private:
  std::size_t requested_;
  std::size_t remaining_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpnia
