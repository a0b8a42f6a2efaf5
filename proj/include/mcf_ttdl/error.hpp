#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mcf {

enum class ErrorCode {
    InvalidArgument,
    NonFinite,
    UnsupportedLayout,
    DegenerateTaps,
    NoMatch,
    NoGuidedMode,
    NotConverged,
    InfeasibleBox,
    PeriodCoverage,
    Parse,
};

inline std::string_view to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::NonFinite: return "non-finite";
        case ErrorCode::UnsupportedLayout: return "unsupported-layout";
        case ErrorCode::DegenerateTaps: return "degenerate-taps";
        case ErrorCode::NoMatch: return "no-match";
        case ErrorCode::NoGuidedMode: return "no-guided-mode";
        case ErrorCode::NotConverged: return "not-converged";
        case ErrorCode::InfeasibleBox: return "infeasible-box";
        case ErrorCode::PeriodCoverage: return "period-coverage";
        case ErrorCode::Parse: return "parse";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

namespace detail {

inline void require(bool ok, ErrorCode code, const std::string& msg) {
    if (!ok) throw Error(code, msg);
}

inline void require_finite(double v, std::string_view name) {
    if (!std::isfinite(v))
        throw Error(ErrorCode::NonFinite, std::string(name) + " is not finite");
}

}  // namespace detail
}  // namespace mcf
