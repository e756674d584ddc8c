#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace laip {

/// Malformed text input (instance files, polynomial files, predictions).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what) {}
};

/// A point, prediction, or model whose length does not match the variable count.
class DimensionError : public std::invalid_argument {
 public:
  DimensionError(std::size_t expected, std::size_t actual)
      : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                              ", got " + std::to_string(actual)) {}
};

inline void check_dimension(std::size_t expected, std::size_t actual) {
  if (expected != actual) throw DimensionError(expected, actual);
}

}  // namespace laip
