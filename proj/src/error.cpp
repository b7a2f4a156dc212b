#include "ndpolar/error.hpp"

namespace ndpolar {

std::string_view code_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::schema: return "E_SCHEMA";
    case ErrorCode::unknown_axis: return "E_UNKNOWN_AXIS";
    case ErrorCode::unknown_grade: return "E_UNKNOWN_GRADE";
    case ErrorCode::unknown_level: return "E_UNKNOWN_LEVEL";
    case ErrorCode::out_of_range: return "E_OUT_OF_RANGE";
    case ErrorCode::non_total: return "E_NON_TOTAL";
    case ErrorCode::parse: return "E_PARSE";
    case ErrorCode::conflict: return "E_CONFLICT";
    case ErrorCode::enumeration_cap: return "E_ENUMERATION_CAP";
    case ErrorCode::invalid: return "E_INVALID";
    case ErrorCode::io: return "E_IO";
    }
    return "E_UNKNOWN";
}

}  // namespace ndpolar
