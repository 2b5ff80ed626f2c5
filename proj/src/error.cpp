#include "morphkit/error.hpp"

namespace morphkit {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DegenerateElement: return "degenerate-element";
    case ErrorCode::Parse: return "parse-error";
    case ErrorCode::DegenerateSnapshots: return "degenerate-snapshots";
    case ErrorCode::DegenerateSample: return "degenerate-sample";
    case ErrorCode::IllPosedOnline: return "ill-posed-online";
    case ErrorCode::IllConditionedOnline: return "ill-conditioned-online";
    case ErrorCode::UndefinedReference: return "undefined-reference";
    case ErrorCode::Domain: return "domain-error";
    case ErrorCode::Lookup: return "lookup-error";
    case ErrorCode::NonFinite: return "non-finite";
    case ErrorCode::Io: return "io-error";
    }
    return "unknown";
}

} // namespace morphkit
