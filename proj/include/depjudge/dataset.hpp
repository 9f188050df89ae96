#pragma once

#include <optional>
#include <string>
#include <vector>

#include "depjudge/label_scale.hpp"

namespace depjudge {

enum class DatasetMode { sequential, two_phase };

const char* mode_name(DatasetMode mode);

/// One disclosed opinion in a sequential elicitation. order_index is the
/// arrival rank within the question (0-based, contiguous). Timestamps are
/// carried for provenance only; downstream computation reads order_index.
struct OpinionEvent {
  std::string question_id;
  std::string worker_id;
  int order_index = 0;
  int score = 0;  // encoded label, 1..k
  std::optional<double> timestamp;

  friend bool operator==(const OpinionEvent&, const OpinionEvent&) = default;
};

/// A worker's phase-1 independent score and phase-2 dependent score on one
/// question.
struct TwoPhaseRecord {
  std::string question_id;
  std::string worker_id;
  int prior_score = 0;
  int posterior_score = 0;

  friend bool operator==(const TwoPhaseRecord&, const TwoPhaseRecord&) = default;
};

// Unvalidated rows, as read from a file or assembled by a caller.
struct RawSequentialRecord {
  std::string question_id;
  std::string worker_id;
  int order_index = 0;
  std::string label;
  std::optional<double> timestamp;
};

struct RawTwoPhaseRecord {
  std::string question_id;
  std::string worker_id;
  std::string prior_label;
  std::string posterior_label;
};

/// A validated collection of opinions in one of the two elicitation modes.
/// Events are canonically sorted by (question_id, order_index), records by
/// (question_id, worker_id); question_ids and worker_ids are the inferred
/// sets Q and W, sorted and unique.
struct Dataset {
  LabelScale scale;
  DatasetMode mode = DatasetMode::sequential;
  std::vector<OpinionEvent> events;
  std::vector<TwoPhaseRecord> records;
  std::vector<std::string> question_ids;
  std::vector<std::string> worker_ids;

  int m() const { return static_cast<int>(question_ids.size()); }
  int n() const { return static_cast<int>(worker_ids.size()); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Validates raw sequential records against the scale: known labels, unique
/// (question, worker) pairs, contiguous 0-based order_index per question,
/// nonnegative timestamps. Total: yields a Dataset or throws exactly one
/// diagnostic Error.
Dataset validate_dataset(const std::vector<RawSequentialRecord>& raw, const LabelScale& scale);

/// Two-phase counterpart: known labels, unique (question, worker) pairs.
Dataset validate_dataset(const std::vector<RawTwoPhaseRecord>& raw, const LabelScale& scale);

}  // namespace depjudge
