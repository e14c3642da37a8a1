// errors.hpp - exception hierarchy shared by every photonsim module
//
// ValidationError and its subclasses map to CLI exit code 2; NoConvergence
// maps to exit code 3.

#pragma once

#include <stdexcept>
#include <string>

namespace photonsim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonMonotoneGrid : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ZeroNorm : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class WindowTooNarrow : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ShapeMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ZeroAmplitude : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace photonsim
