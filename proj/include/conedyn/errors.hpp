#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conedyn {

// Violated precondition on the caller's side (dimension mismatch, empty input).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of the operation (point not in the cone,
// nonpositive coordinate passed to log, unbounded orbit ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Operation not defined in the requested arithmetic mode.
class UnsupportedModeError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A search or enumeration ran out of its budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two routes that must agree did not; always an implementation bug.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A constructed object failed its own certificate.
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SourceLocation {
    std::size_t line = 0;
    std::size_t column = 0;
};

std::string to_string(const SourceLocation& loc);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, SourceLocation loc);
    const SourceLocation& location() const noexcept { return loc_; }

private:
    SourceLocation loc_;
};

// Syntactically valid but violates the grammar's value constraints
// (coefficient <= 0, negative constant, variable index out of range).
class SemanticError : public ParseError {
public:
    using ParseError::ParseError;
};

} // namespace conedyn
