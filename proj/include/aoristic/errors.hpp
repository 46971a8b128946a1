#pragma once

#include <stdexcept>
#include <string>

namespace aoristic {

// Raised when inputs violate a documented precondition or invariant.
// The CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised on filesystem failures. The CLI maps this to exit code 3.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace aoristic
