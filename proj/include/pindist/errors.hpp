#pragma once

#include <stdexcept>
#include <string>

namespace pindist {

// Thrown when an operation would exceed its configured size cap. Callers
// that want the expensive path must raise the cap explicitly.
struct cap_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a cross-checked identity fails. Indicates a bug, never bad input.
struct invariant_violation : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace pindist
