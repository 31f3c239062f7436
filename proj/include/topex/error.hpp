#pragma once

#include <stdexcept>
#include <string>

namespace topex {

// Malformed or empty input data (CSV rows, corpora).
class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Out-of-range configuration values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unreadable, corrupt, or wrong-version model files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A FilterState that violates its invariants.
class StateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace topex
