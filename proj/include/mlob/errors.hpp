#pragma once

#include <stdexcept>
#include <string>

namespace mlob {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Spec/model assumptions violated (bad parameters, failed checks).
class ValidationError : public Error {
public:
    using Error::Error;
};

class RootsNotBracketed : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Evaluation outside the domain of a function (incl. exhausted order book).
class DomainError : public Error {
public:
    using Error::Error;
};

class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

// Query beyond the solved part of a boundary.
class RangeError : public Error {
public:
    using Error::Error;
};

class AsymptoteReached : public RangeError {
public:
    using RangeError::RangeError;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

}  // namespace mlob
