#pragma once

#include <stdexcept>
#include <string>

namespace maxload {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

// A resource guard tripped (class-count cap, enumeration cap).
class CapacityError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

}  // namespace maxload
