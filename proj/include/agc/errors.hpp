#pragma once

#include <stdexcept>
#include <string>

namespace agc {

// Parameters that no construction can satisfy (s does not divide k, odd
// handshake sum, r out of range, ...). The CLI maps this to exit code 2.
class InfeasibleError : public std::invalid_argument {
 public:
  explicit InfeasibleError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical routine failed to produce a trustworthy answer. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace agc
