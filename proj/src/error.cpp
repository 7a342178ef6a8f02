#include "cogsplit/error.hpp"

namespace cogsplit {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadArgument: return "BadArgument";
        case ErrorCode::BadManifest: return "BadManifest";
        case ErrorCode::BadRatio: return "BadRatio";
        case ErrorCode::BadSplitFile: return "BadSplitFile";
        case ErrorCode::DuplicateRecording: return "DuplicateRecording";
        case ErrorCode::UnknownStory: return "UnknownStory";
        case ErrorCode::UnknownSubject: return "UnknownSubject";
        case ErrorCode::UnknownRecording: return "UnknownRecording";
        case ErrorCode::SegmentGap: return "SegmentGap";
        case ErrorCode::NonContiguousExposure: return "NonContiguousExposure";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::MissingContinuation: return "MissingContinuation";
        case ErrorCode::NonPositiveL: return "NonPositiveL";
        case ErrorCode::TooFewSubjects: return "TooFewSubjects";
        case ErrorCode::TooFewStories: return "TooFewStories";
        case ErrorCode::TooFewGroups: return "TooFewGroups";
        case ErrorCode::WrongModality: return "WrongModality";
        case ErrorCode::UncoveredUnit: return "UncoveredUnit";
        case ErrorCode::EmptyTest: return "EmptyTest";
        case ErrorCode::ExposureInfeasible: return "ExposureInfeasible";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::DigestMismatch: return "DigestMismatch";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace cogsplit
