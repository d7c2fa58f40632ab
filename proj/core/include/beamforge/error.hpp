#pragma once

#include <stdexcept>
#include <string>

namespace beamforge {

/// Base class for every domain failure raised by the library. Messages are
/// prefixed with the raising module, e.g. "designer: ...".
class Error : public std::runtime_error {
public:
    Error(const std::string& module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(module) {}

    [[nodiscard]] const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The stiffness matrix could not be factorised.
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Demand exceeds the capacity of the largest catalog section.
class NoCompliantSection : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss or prediction.
class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace beamforge
