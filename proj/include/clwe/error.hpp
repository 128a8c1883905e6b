#pragma once

#include <stdexcept>
#include <string>

namespace clwe {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside an operation's domain (nonpositive width, bad dimension...).
class ParameterError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
};

// Working precision cannot deliver the requested resolution.
class PrecisionError : public Error {
public:
    using Error::Error;
};

// A certified truncation could not be made to meet its tolerance.
class ToleranceError : public Error {
public:
    using Error::Error;
};

// Two independent evaluation routes disagree.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// Enumeration box, attempt budget or sample budget exceeded.
class BudgetError : public Error {
public:
    using Error::Error;
};

// A lemma precondition needed for a transformation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace clwe
