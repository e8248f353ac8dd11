#include "draftvec/error.hpp"

namespace draftvec {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::CorruptImage: return "CorruptImage";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ImageTooSmall: return "ImageTooSmall";
        case ErrorCode::UnknownClassId: return "UnknownClassId";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::MissingSidecar: return "MissingSidecar";
        case ErrorCode::EmptyBox: return "EmptyBox";
        case ErrorCode::EmptyTruth: return "EmptyTruth";
        case ErrorCode::BackendFailure: return "BackendFailure";
        case ErrorCode::SpecInfeasible: return "SpecInfeasible";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::InputUnreadable: return "InputUnreadable";
        case ErrorCode::OutputUnwritable: return "OutputUnwritable";
    }
    return "Unknown";
}

}  // namespace draftvec
