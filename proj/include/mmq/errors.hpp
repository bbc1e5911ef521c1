#pragma once

#include <stdexcept>
#include <string>

namespace mmq {

// Invalid arguments, malformed configuration, dimension mismatches.
class invalid_input : public std::invalid_argument {
 public:
  explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure at runtime: non-convergence, loss of trace, singular fits.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds a runtime guard (grid too large, file too big).
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mmq
