#pragma once

#include <stdexcept>
#include <string>

namespace quadconj {

// User-facing problems: bad syntax, invalid maps, unsupported field sizes.
// The CLI maps these to exit code 1.
class user_error : public std::runtime_error {
public:
    explicit user_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Parse failure with a 0-based offset into the input text.
class parse_error : public user_error {
public:
    parse_error(const std::string& msg, std::size_t position)
        : user_error(msg + " at position " + std::to_string(position)),
          pos(position) {}
    std::size_t pos;
};

// Broken internal invariant (an arithmetic bug, not a user mistake).
// The CLI maps these to exit code 2.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

inline void check_internal(bool ok, const char* what) {
    if (!ok) throw internal_error(what);
}

} // namespace quadconj
