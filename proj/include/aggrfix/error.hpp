#ifndef AGGRFIX_ERROR_HPP
#define AGGRFIX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace aggrfix {

// User-level input problems: parse/sort errors, stratification or
// definiteness failures, unsupported rule shapes.
class UserError : public std::runtime_error {
public:
    explicit UserError(const std::string& msg) : std::runtime_error(msg) {}
};

// A configured enumeration budget was exceeded. Never downgraded to an
// approximate answer.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// An operator that was assumed monotone produced a non-increasing chain,
// or an internal consistency invariant broke.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

class MonotonicityError : public InternalError {
public:
    explicit MonotonicityError(const std::string& msg) : InternalError(msg) {}
};

// Precondition violation on an operation (e.g. revising a pair that is not
// reliable and prudent, or a family applied to an unsupported kind).
class DomainError : public UserError {
public:
    explicit DomainError(const std::string& msg) : UserError(msg) {}
};

} // namespace aggrfix

#endif
