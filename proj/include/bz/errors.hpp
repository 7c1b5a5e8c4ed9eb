#pragma once

#include <stdexcept>
#include <string>

namespace bz {

// Violated operation contract: invalid parameters, grid mismatch,
// enumeration caps, breakpoint separation. Maps to CLI exit code 3.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed external input (files, flags). Maps to CLI exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;

    InputError(const std::string& file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what) {}
};

// A post-condition check on computed results failed. Maps to CLI exit code 4.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bz
