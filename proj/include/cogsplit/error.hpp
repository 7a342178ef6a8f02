#pragma once

#include <stdexcept>
#include <string>

namespace cogsplit {

// Stable error codes. The CLI prints the code name on stderr and maps the
// category to its exit code, so names are part of the tool's contract.
enum class ErrorCode {
    BadArgument,
    BadManifest,
    BadRatio,
    BadSplitFile,
    DuplicateRecording,
    UnknownStory,
    UnknownSubject,
    UnknownRecording,
    SegmentGap,
    NonContiguousExposure,
    EmptyDataset,
    MissingContinuation,
    NonPositiveL,
    TooFewSubjects,
    TooFewStories,
    TooFewGroups,
    WrongModality,
    UncoveredUnit,
    EmptyTest,
    ExposureInfeasible,
    TooLarge,
    DigestMismatch,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
          code_(code) {}

    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

private:
    ErrorCode code_;
};

}  // namespace cogsplit
