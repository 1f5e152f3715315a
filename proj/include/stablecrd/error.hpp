#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stablecrd {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

class NotApplicableError : public Error {
public:
    using Error::Error;
};

/// Raised when an operation is restricted to a reaction class the CRD is not in.
class UnsupportedClassError : public Error {
public:
    using Error::Error;
};

class ZeroConfigurationError : public Error {
public:
    ZeroConfigurationError()
        : Error("the zero configuration is neither o-stable nor o-unstable") {}
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A truncated min(U) was asked to certify stability beyond the sizes it covers.
class UncertifiableError : public Error {
public:
    using Error::Error;
};

class CapExceededError : public Error {
public:
    CapExceededError(const std::string& what, std::size_t visited)
        : Error(what), visited_(visited) {}

    std::size_t visited() const { return visited_; }

private:
    std::size_t visited_;
};

struct Diagnostic {
    std::size_t line = 0;    // 1-based
    std::size_t column = 0;  // 1-based
    std::string message;
};

class ParseError : public Error {
public:
    explicit ParseError(std::vector<Diagnostic> diagnostics);

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

}  // namespace stablecrd
