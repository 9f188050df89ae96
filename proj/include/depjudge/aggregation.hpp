#pragma once

#include <map>
#include <string>
#include <vector>

#include "depjudge/dataset.hpp"
#include "depjudge/metrics.hpp"

namespace depjudge {

enum class ConsensusMethod { weighted, unweighted_mean, prior_mean, majority };

const char* method_name(ConsensusMethod method);

/// Which metric feeds the weighted method: the worker's weight on that very
/// question, or the worker's mean weight across all answered questions.
enum class WeightSource { per_question, per_worker };

struct ConsensusResult {
  std::string question_id;
  ConsensusMethod method = ConsensusMethod::unweighted_mean;
  double aggregate_score = 0.0;
  std::string final_label;
  std::map<std::string, double> support;  // weight actually used per worker
  bool uniform_fallback = false;          // all supplied weights were zero
};

struct RecoveryRow {
  ConsensusMethod method = ConsensusMethod::unweighted_mean;
  double exact_match_rate = 0.0;
  double mae = 0.0;
};

/// Rounds a fractional aggregate to the nearest score in 1..k. A half-way
/// aggregate rounds away from the scale midpoint (k + 1) / 2; an aggregate
/// exactly at the midpoint rounds down. Half-way detection uses a 1e-9 band
/// so the tie rule fires identically on both sides of float rounding.
int round_to_scale(double aggregate, int k);

ConsensusResult weighted_consensus(const std::string& question_id,
                                   const std::map<std::string, int>& posteriors,
                                   const std::map<std::string, double>& weights,
                                   const LabelScale& scale);

ConsensusResult unweighted_mean_consensus(const std::string& question_id,
                                          const std::map<std::string, int>& posteriors,
                                          const LabelScale& scale);

ConsensusResult prior_mean_consensus(const std::string& question_id,
                                     const std::map<std::string, int>& priors,
                                     const LabelScale& scale);

/// Modal score; ties break toward the score closest to the mean, then lower.
ConsensusResult majority_consensus(const std::string& question_id,
                                   const std::map<std::string, int>& posteriors,
                                   const LabelScale& scale);

/// All four methods per question of a two-phase dataset, weights taken from
/// the metrics report. Results ordered by (question_id, method).
std::vector<ConsensusResult> aggregate_two_phase(const Dataset& dataset,
                                                 const MetricsReport& metrics,
                                                 WeightSource source = WeightSource::per_question);

/// Baseline methods (unweighted mean, majority) over the disclosed scores of
/// a sequential dataset.
std::vector<ConsensusResult> aggregate_sequential(const Dataset& dataset);

/// Exact-match rate and mean absolute score error per method, against a
/// question -> true score map. Throws MissingTruth when a result's question
/// has no truth entry.
std::vector<RecoveryRow> evaluate_recovery(const std::vector<ConsensusResult>& results,
                                           const std::map<std::string, int>& truth,
                                           const LabelScale& scale);

}  // namespace depjudge
