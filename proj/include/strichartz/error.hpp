#pragma once

#include <stdexcept>
#include <string>

namespace strichartz {

// Every failure surfaced by the library carries a short machine-readable code
// ("grid-underresolved", "no-convergence", ...) next to the human message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

namespace errc {
inline constexpr const char* grid_underresolved = "grid-underresolved";
inline constexpr const char* invalid_alpha = "invalid-alpha";
inline constexpr const char* singular_at_zero = "singular-at-zero";
inline constexpr const char* invalid_exponent = "invalid-exponent";
inline constexpr const char* no_convergence = "no-convergence";
inline constexpr const char* endpoint_pair = "endpoint-pair";
inline constexpr const char* inadmissible_pair = "inadmissible-pair";
inline constexpr const char* stalled = "stalled";
inline constexpr const char* grid_mismatch = "grid-mismatch";
inline constexpr const char* invalid_input = "invalid-input";
inline constexpr const char* zero_datum = "zero-datum";
inline constexpr const char* degenerate_sequence = "degenerate-sequence";
inline constexpr const char* on_diagonal = "on-diagonal";
inline constexpr const char* support_violation = "support-violation";
inline constexpr const char* invalid_p = "invalid-p";
}  // namespace errc

[[noreturn]] inline void fail(const char* code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace strichartz
