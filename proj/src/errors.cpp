#include "helmspec/errors.hpp"

namespace helmspec {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
        case ErrorCode::UnsupportedIndex: return "UnsupportedIndex";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::NonPositiveGamma: return "NonPositiveGamma";
        case ErrorCode::ZeroModePresent: return "ZeroModePresent";
        case ErrorCode::InsufficientTruncation: return "InsufficientTruncation";
        case ErrorCode::LostOverlap: return "LostOverlap";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::DegenerateSubspace: return "DegenerateSubspace";
        case ErrorCode::RankCollapse: return "RankCollapse";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::UnsupportedModel: return "UnsupportedModel";
        case ErrorCode::ResolutionTooLow: return "ResolutionTooLow";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace helmspec
