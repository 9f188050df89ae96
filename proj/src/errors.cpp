#include "depjudge/errors.hpp"

namespace depjudge {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::duplicate_label: return "DuplicateLabel";
    case Errc::scale_too_small: return "ScaleTooSmall";
    case Errc::unknown_label: return "UnknownLabel";
    case Errc::duplicate_opinion: return "DuplicateOpinion";
    case Errc::gap_in_arrival_order: return "GapInArrivalOrder";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::invalid_timestamp: return "InvalidTimestamp";
    case Errc::score_out_of_range: return "ScoreOutOfRange";
    case Errc::empty_input: return "EmptyInput";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::wrong_mode: return "WrongMode";
    case Errc::key_mismatch: return "KeyMismatch";
    case Errc::missing_truth: return "MissingTruth";
    case Errc::enumeration_too_large: return "EnumerationTooLarge";
    case Errc::zero_evidence: return "ZeroEvidence";
    case Errc::file_not_found: return "FileNotFound";
    case Errc::parse_error: return "ParseError";
    case Errc::usage_error: return "UsageError";
    case Errc::config_invalid: return "ConfigInvalid";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

}  // namespace depjudge
