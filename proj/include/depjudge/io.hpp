#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "depjudge/aggregation.hpp"
#include "depjudge/dataset.hpp"
#include "depjudge/experiment.hpp"
#include "depjudge/metrics.hpp"
#include "depjudge/truth_inference.hpp"

namespace depjudge {

/// Shortest round-trip decimal form, "%.12g"-style; locale independent.
std::string format_number(double value);

// Dataset files are JSON Lines, one record per line.
// Sequential fields:  question_id, worker_id, order_index, label, timestamp?
// Two-phase fields:   question_id, worker_id, prior_label, posterior_label
// Truth fields:       question_id, truth_label
// True-opinion fields: question_id, worker_id, true_label
Dataset parse_sequential_file(const std::filesystem::path& path, const LabelScale& scale);
Dataset parse_two_phase_file(const std::filesystem::path& path, const LabelScale& scale);
void write_sequential_file(const std::filesystem::path& path, const Dataset& dataset);
void write_two_phase_file(const std::filesystem::path& path, const Dataset& dataset);

std::map<std::string, int> parse_truth_file(const std::filesystem::path& path,
                                            const LabelScale& scale);
void write_truth_file(const std::filesystem::path& path,
                      const std::map<std::string, int>& truth, const LabelScale& scale);

std::map<std::pair<std::string, std::string>, int> parse_true_opinions_file(
    const std::filesystem::path& path, const LabelScale& scale);
void write_true_opinions_file(const std::filesystem::path& path,
                              const std::map<std::pair<std::string, std::string>, int>& opinions,
                              const LabelScale& scale);

/// Scale file: one label per line, worst first.
LabelScale parse_scale_file(const std::filesystem::path& path);
void write_scale_file(const std::filesystem::path& path, const LabelScale& scale);

/// Per-worker gammas: CSV with header "worker_id,gamma".
std::map<std::string, double> parse_gammas_file(const std::filesystem::path& path);

// Report writers; all CSV with a header row.
void write_metrics_csv(const std::filesystem::path& path, const MetricsReport& report);
void write_summary_csv(const std::filesystem::path& path, const MetricsReport& report);
void write_consensus_csv(const std::filesystem::path& path,
                         const std::vector<ConsensusResult>& results);
void write_recovery_csv(const std::filesystem::path& path, const std::vector<RecoveryRow>& rows);
void write_debias_csv(const std::filesystem::path& path, const DebiasReport& report);

/// Posterior table rows for the questions of a sequential dataset, workers
/// in arrival order.
struct QuestionPosterior {
  std::string question_id;
  std::vector<std::string> worker_ids;  // arrival order
  PosteriorTable table;
};

void write_posterior_csv(const std::filesystem::path& path,
                         const std::vector<QuestionPosterior>& posteriors);
void write_map_csv(const std::filesystem::path& path,
                   const std::vector<QuestionPosterior>& posteriors, const LabelScale& scale);

}  // namespace depjudge
