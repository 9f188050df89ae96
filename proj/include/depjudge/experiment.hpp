#pragma once

#include <optional>

#include "depjudge/aggregation.hpp"
#include "depjudge/bias_sim.hpp"
#include "depjudge/truth_inference.hpp"

namespace depjudge {

/// How often the Eq.-style posterior MAP readout and the face-value reading
/// (disclosed taken as true) match the hidden true opinions, over all
/// (question, worker) pairs.
struct DebiasReport {
  double map_match_rate = 0.0;
  double face_value_match_rate = 0.0;
  int opinions = 0;
  int questions = 0;
};

struct ExperimentResult {
  std::vector<SimOutput> replications;
  Dataset combined;  // all replications in one flat dataset
  std::map<std::string, int> ground_truth;
  std::map<std::pair<std::string, std::string>, int> true_opinions;
  MetricsReport metrics;                  // two-phase mode only
  std::vector<ConsensusResult> consensus;
  std::vector<RecoveryRow> recovery;
  std::optional<DebiasReport> debias;     // sequential mode, within enumeration limits
};

/// Runs every replication on derived child seeds, merges the outputs into
/// one flat dataset, and evaluates: metrics + all four consensus methods
/// (two-phase), or baseline consensus + MAP-vs-face-value debiasing
/// (sequential, skipped when the worker count exceeds the enumeration
/// limit). Identical (config, seed) give identical results.
ExperimentResult run_experiment(const SimConfig& config,
                                WeightSource weight_source = WeightSource::per_question,
                                double epsilon = kDefaultEpsilon,
                                double r_cap = kDefaultReliabilityCap,
                                std::size_t enumeration_limit = kDefaultEnumerationLimit);

/// MAP-vs-face-value comparison for an already simulated sequential run,
/// inverting with the workers' own gammas and uniform priors.
DebiasReport debias_comparison(const Dataset& dataset,
                               const std::map<std::pair<std::string, std::string>, int>& true_opinions,
                               const std::map<std::string, double>& gammas_by_worker,
                               ConformityTarget target = ConformityTarget::mean,
                               std::size_t enumeration_limit = kDefaultEnumerationLimit);

}  // namespace depjudge
