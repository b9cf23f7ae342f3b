#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace predprey {

// A solver state became NaN/Inf; carries the step at which it happened.
class BlowupError : public std::runtime_error {
 public:
  explicit BlowupError(std::uint64_t step)
      : std::runtime_error("non-finite state at step " + std::to_string(step)),
        step_(step) {}
  std::uint64_t step() const { return step_; }

 private:
  std::uint64_t step_;
};

// Reject positivity policy tripped: a density went below -tolerance.
class PositivityError : public std::runtime_error {
 public:
  PositivityError(std::uint64_t step, std::size_t index, double value)
      : std::runtime_error("negative density " + std::to_string(value) +
                           " at grid index " + std::to_string(index) +
                           ", step " + std::to_string(step)),
        step_(step),
        index_(index),
        value_(value) {}
  std::uint64_t step() const { return step_; }
  std::size_t index() const { return index_; }
  double value() const { return value_; }

 private:
  std::uint64_t step_;
  std::size_t index_;
  double value_;
};

// Configuration text failed to parse or validate.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
  ConfigError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what) {}
};

}  // namespace predprey
