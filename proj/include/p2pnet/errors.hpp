#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace p2pnet {

/// Bad argument: out-of-range node id, invalid parameter combination.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but the requested quantity is undefined on it.
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A topology build could not complete.
class GenerationError : public std::runtime_error {
 public:
  GenerationError(const std::string& what, std::size_t progress)
      : std::runtime_error(what), progress_(progress) {}

  /// Node index that stalled (PA/HAPA) or peers achieved (DAPA).
  std::size_t progress() const noexcept { return progress_; }

 private:
  std::size_t progress_;
};

/// Not enough support in a histogram to fit.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace p2pnet
