#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netrobust {

// Base of every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyNetworkError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Modularity divides by 2m, so it has no value on an edgeless graph.
class UndefinedModularityError : public Error {
 public:
  using Error::Error;
};

// Requested more added edges than there are absent cross-partition pairs.
class CapacityError : public Error {
 public:
  CapacityError(std::size_t requested, std::size_t max_feasible)
      : Error("cannot add " + std::to_string(requested) + " edges; at most " +
              std::to_string(max_feasible) + " absent pairs are available"),
        requested_(requested),
        max_feasible_(max_feasible) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t max_feasible() const noexcept { return max_feasible_; }

 private:
  std::size_t requested_;
  std::size_t max_feasible_;
};

class GridError : public Error {
 public:
  using Error::Error;
};

class ManifestError : public Error {
 public:
  using Error::Error;
};

}  // namespace netrobust
