#pragma once

#include <stdexcept>
#include <string>

namespace kgal {

// Base class for all errors raised by this library.
struct kgal_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (bad tables, failed preconditions).
struct invalid_input : kgal_error {
    using kgal_error::kgal_error;
};

// Structurally valid input that exceeds a documented size bound.
struct unsupported : kgal_error {
    using kgal_error::kgal_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw invalid_input(msg);
}

} // namespace kgal
