#pragma once

#include <stdexcept>
#include <string>

namespace tileregu {

enum class ErrorKind {
    WrongCount,
    MissingZero,
    EquivalentPair,
    Overflow,
    NotExpanding,
    CapExceeded,
    NotInvariant,
    NotStochastic,
    NoConvergence,
    Unsupported,
    BudgetExceeded,
    GridTooLarge,
    EpsTooSmall,
    DegenerateData,
    TooLarge,
    IoError,
    InvalidInput,
};

const char* kind_name(ErrorKind k) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Raised for EquivalentPair so callers can report which digits collide.
class EquivalentPairError : public Error {
public:
    EquivalentPairError(std::size_t i, std::size_t j, const std::string& msg)
        : Error(ErrorKind::EquivalentPair, msg), i_(i), j_(j) {}
    std::size_t first() const noexcept { return i_; }
    std::size_t second() const noexcept { return j_; }

private:
    std::size_t i_, j_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

} // namespace tileregu
