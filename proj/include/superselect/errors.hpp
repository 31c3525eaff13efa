#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace superselect {

// Bad arguments: out-of-range indices, mismatched lengths, invalid specs.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A brute-force oracle was asked to enumerate more subsets than its budget.
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct construction_failure : std::runtime_error {
  construction_failure(const std::string& what, std::size_t attempts)
      : std::runtime_error(what), attempts(attempts) {}
  std::size_t attempts;
};

// Rounding overturned a conditional-expectation comparison; the certified
// output failed brute-force verification.
struct precision_fault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An observation that cannot be the sum of any admissible column set.
struct inconsistent_input : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invariant_violation : std::logic_error {
  using std::logic_error::logic_error;
};

struct parse_error : std::runtime_error {
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

}  // namespace superselect
