#pragma once

#include <stdexcept>
#include <string>

namespace casched {

// Input that violates a documented contract (bad file, bad field, bad
// permutation). The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A structurally valid request that is infeasible under the configured caps
// (enumeration too large, method unavailable for the topology). Exit code 2.
class CapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace casched
