#pragma once

#include <stdexcept>
#include <string>

namespace docclust {

// Base of every exception thrown by the library. The CLI maps ConfigError to
// exit code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters or a parameter combination that can never succeed.
class ConfigError : public Error {
public:
    using Error::Error;
};

// The data does not satisfy an operation's preconditions.
class DataError : public Error {
public:
    using Error::Error;
};

// HDBSCAN found no cluster, so noise reassignment has nothing to learn from.
class AllNoiseError : public DataError {
public:
    using DataError::DataError;
};

// Every grid point produced an undefined silhouette.
class ExhaustedGridError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace docclust
