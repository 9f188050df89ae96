#pragma once

#include <string>
#include <vector>

#include "depjudge/dataset.hpp"

namespace depjudge {

inline constexpr double kDefaultEpsilon = 1e-9;
inline constexpr double kDefaultReliabilityCap = 100.0;

/// Per-(worker, question) quality figures computed from two-phase data.
struct WorkerQuestionMetrics {
  std::string worker_id;
  std::string question_id;
  double drop = 0.0;             // |prior - posterior|, in score units
  double deviation_ratio = 0.0;  // (drop + eps) / (mean shift + eps)
  double reliability = 0.0;      // min(1 / deviation_ratio, r_cap)
  double accuracy = 0.0;         // 1 - |posterior - mean posterior| / (k - 1)
  double weight = 0.0;           // reliability / (1 + reliability) * accuracy
};

/// Arithmetic means over the questions a worker answered.
struct WorkerSummary {
  std::string worker_id;
  double mean_drop = 0.0;
  double mean_reliability = 0.0;
  double mean_accuracy = 0.0;
  double mean_weight = 0.0;
};

struct MetricsReport {
  std::vector<WorkerQuestionMetrics> per_question;  // sorted by (question_id, worker_id)
  std::vector<WorkerSummary> summaries;             // sorted by worker_id
};

/// |prior - posterior|. Both scores must lie in 1..k.
double drop_of_confidence(int prior_score, int posterior_score, int k);

/// |mean(priors) - mean(posteriors)| over the workers of one question,
/// paired by position.
double mean_shift(const std::vector<int>& priors, const std::vector<int>& posteriors);

/// Smoothed ratio (drop + epsilon) / (shift + epsilon). Total for all
/// nonnegative inputs; drop == shift == 0 gives exactly 1.
double deviation_ratio(double drop, double shift, double epsilon = kDefaultEpsilon);

/// Reciprocal of the deviation ratio, capped at r_cap.
double reliability(double deviation_ratio, double r_cap = kDefaultReliabilityCap);

/// Closeness of one posterior to the question's mean posterior, normalized
/// by the scale diameter k - 1 so the result lies in [0, 1].
double accuracy(int posterior_score, const std::vector<int>& all_posteriors, int k);

/// Consensus weight in [0, 1): reliability squashed to [0, 1) times accuracy.
double worker_weight(double reliability, double accuracy);

/// Full per-question metric table plus per-worker rollup for a two-phase
/// dataset. Throws WrongMode on sequential input.
MetricsReport compute_metrics(const Dataset& dataset, double epsilon = kDefaultEpsilon,
                              double r_cap = kDefaultReliabilityCap);

}  // namespace depjudge
