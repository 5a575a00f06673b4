#pragma once

#include <stdexcept>
#include <string>

namespace pvs {

struct SourceLoc {
    std::string file;
    int line = 0;
    int col = 0;

    std::string str() const {
        if (line == 0) return file.empty() ? std::string("<input>") : file;
        return (file.empty() ? std::string("<input>") : file) + ":" + std::to_string(line) + ":" +
               std::to_string(col);
    }
};

// Input-level problems: syntax errors, sort errors, undeclared symbols,
// ill-formed certificates. Mapped to exit code 3 by the CLI.
class InputError : public std::runtime_error {
public:
    InputError(SourceLoc loc, const std::string& msg)
        : std::runtime_error(loc.str() + ": " + msg), loc_(loc), msg_(msg) {}
    explicit InputError(const std::string& msg) : std::runtime_error(msg), msg_(msg) {}
    const SourceLoc& loc() const { return loc_; }
    const std::string& message() const { return msg_; }

private:
    SourceLoc loc_;
    std::string msg_;
};

// Internal invariant violations; should never escape in normal operation.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& msg) : std::logic_error("internal: " + msg) {}
};

// Raised when a computation must give up for a documented reason
// (DNF blowup, integrality undecided, unsupported elimination, ...).
class UnknownResult : public std::runtime_error {
public:
    explicit UnknownResult(const std::string& reason)
        : std::runtime_error(reason), reason_(reason) {}
    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
};

}  // namespace pvs
