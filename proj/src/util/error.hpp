#pragma once

#include <stdexcept>
#include <string>

namespace omicause {

// Base of every exception the library throws. The C API maps each subclass to
// a distinct status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad argument or violated precondition (unknown column, wrong variable kind).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Filesystem / parse failures.
class IoError : public Error {
public:
    using Error::Error;
};

// The data cannot support the requested computation (empty table, singular
// covariance, too few rows).
class DataError : public Error {
public:
    using Error::Error;
};

// Graph-structural violations (cycle in a DAG, node-set mismatch).
class GraphError : public Error {
public:
    using Error::Error;
};

}  // namespace omicause
