#ifndef SPECTER_ERRORS_HPP
#define SPECTER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace specter {

// All failure modes surface as typed exceptions so the CLI can map them
// onto stable exit codes.

struct EmptyPayload : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LengthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SignalNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySelection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooFewSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace specter

#endif
