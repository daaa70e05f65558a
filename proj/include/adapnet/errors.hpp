#pragma once

#include <stdexcept>
#include <string>

namespace adapnet {

// Bad shapes, bad arguments, inconsistent caches.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Missing files, unreadable manifests, invalid configs.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite values or failed numerical checks.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace adapnet
