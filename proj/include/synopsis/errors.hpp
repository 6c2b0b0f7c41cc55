#pragma once

#include <stdexcept>
#include <string>

namespace synopsis {

/// Input that breaks a documented invariant (bad file, illegal mapping, bad flag).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A frame index or interval that falls outside a tube's span.
class OutOfRangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A schedule file whose recorded tube-database hash does not match.
class StaleReferenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Problem instance too large for an exhaustive routine.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

} // namespace synopsis
