#pragma once

#include <stdexcept>
#include <string>

namespace spine3 {

// Error taxonomy. Validation errors mean the input data is bad (CLI exit 1).
// Sentinel errors mean a mathematical identity the construction guarantees
// failed to hold, i.e. an implementation bug (CLI exit 2).
enum class ErrorCode {
    InvalidInput,
    UngluedFace,
    BadPermutation,
    SelfFaceGluing,
    NonOrientable,
    NotInTASperp,
    NotApplicable,
    NotDegenerating,
    DegenerateShape,
    NotShapeConsistent,
    InitFailure,       // sentinel
    IdentityViolation, // sentinel
    DualityViolation,  // sentinel
    ClaimViolation,    // sentinel
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::UngluedFace: return "UngluedFace";
    case ErrorCode::BadPermutation: return "BadPermutation";
    case ErrorCode::SelfFaceGluing: return "SelfFaceGluing";
    case ErrorCode::NonOrientable: return "NonOrientable";
    case ErrorCode::NotInTASperp: return "NotInTASperp";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::NotDegenerating: return "NotDegenerating";
    case ErrorCode::DegenerateShape: return "DegenerateShape";
    case ErrorCode::NotShapeConsistent: return "NotShapeConsistent";
    case ErrorCode::InitFailure: return "InitFailure";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
    case ErrorCode::DualityViolation: return "DualityViolation";
    case ErrorCode::ClaimViolation: return "ClaimViolation";
    }
    return "Unknown";
}

inline bool is_sentinel(ErrorCode c) {
    return c == ErrorCode::InitFailure || c == ErrorCode::IdentityViolation ||
           c == ErrorCode::DualityViolation || c == ErrorCode::ClaimViolation;
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
          code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

} // namespace spine3
