#pragma once

#include <stdexcept>
#include <string>

namespace cornertrack {

// Exception taxonomy used across the library. Callers that only care about
// "something went wrong" can catch cornertrack::Error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tensor/kernel shape disagreements (channel mismatch, wrong extents, ...).
struct ShapeError : Error {
    using Error::Error;
};

// Bad user-provided data: degenerate boxes, malformed files, invalid specs.
struct InputError : Error {
    using Error::Error;
};

// API misuse: preconditions the caller controls (non-scalar loss, wrong
// coordinate space, K < 1).
struct ContractError : Error {
    using Error::Error;
};

// Non-finite values where finite ones are required.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace cornertrack
