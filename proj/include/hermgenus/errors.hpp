#ifndef HERMGENUS_ERRORS_HPP
#define HERMGENUS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hermgenus {

// Malformed user input (bad file, bad option value).  CLI exit code 1.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An operation was called outside its contract.  CLI exit code 2.
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A result failed its own verification.  CLI exit code 3.
struct verification_error : std::runtime_error {
    explicit verification_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw precondition_error(msg);
}

inline void verify(bool cond, const std::string& msg) {
    if (!cond) throw verification_error(msg);
}

} // namespace hermgenus

#endif
