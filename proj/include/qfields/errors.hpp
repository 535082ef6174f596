#pragma once

#include <stdexcept>
#include <string>

namespace qf {

/// A precondition on the arguments was violated (bad input, not a math fact).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A configured computation budget (factoring iterations, discriminant size,
/// search bound) was exhausted. The result is unknown, never guessed.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input is outside the range where an answer can be certified
/// deterministically (e.g. primality beyond the proven witness bound).
class UnsupportedRange : public ResourceError {
public:
    using ResourceError::ResourceError;
};

/// A construction hypothesis failed. `check()` names the failed condition.
class Rejection : public std::runtime_error {
public:
    Rejection(std::string check, const std::string& detail)
        : std::runtime_error(check + ": " + detail), check_(std::move(check)) {}

    const std::string& check() const noexcept { return check_; }

private:
    std::string check_;
};

}  // namespace qf
