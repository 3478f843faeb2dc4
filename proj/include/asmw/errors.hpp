#pragma once

#include <stdexcept>
#include <string>

namespace asmw {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Positioned error from the parsers. Line/col are 1-based.
struct SyntaxError : Error {
    int line = 0;
    int col = 0;
    SyntaxError(const std::string& msg, int line_, int col_)
        : Error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

struct SortError : Error {
    int line = 0;
    int col = 0;
    explicit SortError(const std::string& msg) : Error(msg) {}
    SortError(const std::string& msg, int line_, int col_)
        : Error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

struct UnboundVariable : Error {
    using Error::Error;
};

struct InconsistentUpdateSet : Error {
    using Error::Error;
};

// Raised when a configured cap (family size, set size, predicate-domain
// enumeration, translation output size) is exceeded. Never downgraded to an
// approximate answer.
struct ResourceLimit : Error {
    using Error::Error;
};

struct IllFormedInstantiation : Error {
    using Error::Error;
};

// File-level problems: missing sections, incompatible signatures, bad atoms.
struct InputError : Error {
    using Error::Error;
};

}  // namespace asmw
