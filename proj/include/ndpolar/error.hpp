#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ndpolar {

enum class ErrorCode {
    schema,
    unknown_axis,
    unknown_grade,
    unknown_level,
    out_of_range,
    non_total,
    parse,
    conflict,
    enumeration_cap,
    invalid,
    io,
};

/// Machine-readable name, e.g. "E_SCHEMA".
std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ndpolar
