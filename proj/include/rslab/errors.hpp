#pragma once

#include <stdexcept>
#include <string>

namespace rslab {

// Rejected input or precondition violation.  CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Internal inconsistency (residue reconstruction failure, oracle mismatch,
// corrupted tables).  CLI maps this to exit code 3.
class InternalError : public std::runtime_error {
  public:
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rslab
