#pragma once

#include <stdexcept>
#include <string>

namespace far {

// Bad input: a scenario field, CLI argument or sweep spec that breaks an invariant.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed scenario file. The message carries the line/column or offending key.
class ParseError : public ValidationError {
public:
    explicit ParseError(const std::string& what) : ValidationError(what) {}
};

// The numerical machinery failed to produce a certified answer.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace far
