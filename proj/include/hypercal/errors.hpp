#pragma once

#include <stdexcept>
#include <string>

namespace hypercal {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input: bad model files, bad scalar grammar, unknown keys.
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

// Violated precondition or failed structural validation.
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

} // namespace hypercal
