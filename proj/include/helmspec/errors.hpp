#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace helmspec {

enum class ErrorCode {
    NonPositiveDensity,
    UnsupportedIndex,
    OutOfDomain,
    NonPositiveGamma,
    ZeroModePresent,
    InsufficientTruncation,
    LostOverlap,
    NoConvergence,
    DegenerateSubspace,
    RankCollapse,
    TooShort,
    UnsupportedModel,
    ResolutionTooLow,
    InvalidArgument,
    ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace helmspec
