#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace morphkit {

enum class ErrorCode {
    InvalidArgument,
    DegenerateElement,
    Parse,
    DegenerateSnapshots,
    DegenerateSample,
    IllPosedOnline,
    IllConditionedOnline,
    UndefinedReference,
    Domain,
    Lookup,
    NonFinite,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for all library failures; `code()` classifies it.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, const std::string& what) {
    if (!condition) fail(ErrorCode::InvalidArgument, what);
}

} // namespace morphkit
