#pragma once

#include <stdexcept>
#include <string>

namespace sip {

enum class ErrorCode {
    InvalidInput,
    InvalidRank,
    ShapeError,
    AlignmentDegenerate,
    TooFewSamples,
    InvalidQuantile,
    InvalidRidge,
    InvalidConfidence,
    DegenerateMargins,
    DegenerateLabels,
    DegenerateGap,
    SingularScatter,
    InfeasibleGap,
    InfiniteVariance,
    InvalidSeries,
    InvalidConfig,
    LabelError,
    FormatError,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::InvalidRank: return "InvalidRank";
        case ErrorCode::ShapeError: return "ShapeError";
        case ErrorCode::AlignmentDegenerate: return "AlignmentDegenerate";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::InvalidQuantile: return "InvalidQuantile";
        case ErrorCode::InvalidRidge: return "InvalidRidge";
        case ErrorCode::InvalidConfidence: return "InvalidConfidence";
        case ErrorCode::DegenerateMargins: return "DegenerateMargins";
        case ErrorCode::DegenerateLabels: return "DegenerateLabels";
        case ErrorCode::DegenerateGap: return "DegenerateGap";
        case ErrorCode::SingularScatter: return "SingularScatter";
        case ErrorCode::InfeasibleGap: return "InfeasibleGap";
        case ErrorCode::InfiniteVariance: return "InfiniteVariance";
        case ErrorCode::InvalidSeries: return "InvalidSeries";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::LabelError: return "LabelError";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace sip
