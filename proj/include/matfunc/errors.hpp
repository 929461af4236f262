#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace matfunc {

// Single exception type for the whole library.  `token` is a stable,
// greppable identifier for the failure case; what() always starts with it.
class Error : public std::runtime_error {
public:
    Error(std::string token, const std::string& message)
        : std::runtime_error(token + ": " + message), token_(std::move(token)) {}

    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

[[noreturn]] inline void raise_error(const char* token, const std::string& msg) {
    throw Error(token, msg);
}

}  // namespace matfunc
