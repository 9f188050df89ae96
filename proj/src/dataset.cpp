#include "depjudge/dataset.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace depjudge {

const char* mode_name(DatasetMode mode) {
  return mode == DatasetMode::sequential ? "sequential" : "two-phase";
}

namespace {

std::vector<std::string> sorted_unique(std::set<std::string>&& values) {
  return {values.begin(), values.end()};
}

}  // namespace

Dataset validate_dataset(const std::vector<RawSequentialRecord>& raw, const LabelScale& scale) {
  if (raw.empty()) throw Error(Errc::empty_dataset, "no sequential records supplied");

  Dataset dataset;
  dataset.scale = scale;
  dataset.mode = DatasetMode::sequential;
  dataset.events.reserve(raw.size());

  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> questions;
  std::set<std::string> workers;
  for (const auto& record : raw) {
    OpinionEvent event;
    event.question_id = record.question_id;
    event.worker_id = record.worker_id;
    event.order_index = record.order_index;
    event.score = scale.encode(record.label);
    if (record.timestamp && *record.timestamp < 0.0) {
      throw Error(Errc::invalid_timestamp, "negative timestamp on (" + record.question_id +
                                               ", " + record.worker_id + ")");
    }
    event.timestamp = record.timestamp;
    if (!seen.emplace(record.question_id, record.worker_id).second) {
      throw Error(Errc::duplicate_opinion, "worker '" + record.worker_id +
                                               "' answered question '" + record.question_id +
                                               "' more than once");
    }
    questions.insert(record.question_id);
    workers.insert(record.worker_id);
    dataset.events.push_back(std::move(event));
  }

  // Arrival ranks within each question must form 0..c-1 with no duplicates.
  std::map<std::string, std::set<int>> ranks;
  for (const auto& event : dataset.events) {
    if (!ranks[event.question_id].insert(event.order_index).second) {
      throw Error(Errc::gap_in_arrival_order, "duplicate order_index " +
                                                  std::to_string(event.order_index) +
                                                  " in question '" + event.question_id + "'");
    }
  }
  for (const auto& [question, indices] : ranks) {
    const int count = static_cast<int>(indices.size());
    if (*indices.begin() != 0 || *indices.rbegin() != count - 1) {
      throw Error(Errc::gap_in_arrival_order,
                  "order_index values in question '" + question + "' are not contiguous from 0");
    }
  }

  std::sort(dataset.events.begin(), dataset.events.end(), [](const auto& a, const auto& b) {
    return std::tie(a.question_id, a.order_index) < std::tie(b.question_id, b.order_index);
  });
  dataset.question_ids = sorted_unique(std::move(questions));
  dataset.worker_ids = sorted_unique(std::move(workers));
  return dataset;
}

Dataset validate_dataset(const std::vector<RawTwoPhaseRecord>& raw, const LabelScale& scale) {
  if (raw.empty()) throw Error(Errc::empty_dataset, "no two-phase records supplied");

  Dataset dataset;
  dataset.scale = scale;
  dataset.mode = DatasetMode::two_phase;
  dataset.records.reserve(raw.size());

  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> questions;
  std::set<std::string> workers;
  for (const auto& record : raw) {
    TwoPhaseRecord validated;
    validated.question_id = record.question_id;
    validated.worker_id = record.worker_id;
    validated.prior_score = scale.encode(record.prior_label);
    validated.posterior_score = scale.encode(record.posterior_label);
    if (!seen.emplace(record.question_id, record.worker_id).second) {
      throw Error(Errc::duplicate_opinion, "worker '" + record.worker_id +
                                               "' answered question '" + record.question_id +
                                               "' more than once");
    }
    questions.insert(record.question_id);
    workers.insert(record.worker_id);
    dataset.records.push_back(std::move(validated));
  }

  std::sort(dataset.records.begin(), dataset.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.question_id, a.worker_id) < std::tie(b.question_id, b.worker_id);
  });
  dataset.question_ids = sorted_unique(std::move(questions));
  dataset.worker_ids = sorted_unique(std::move(workers));
  return dataset;
}

}  // namespace depjudge
