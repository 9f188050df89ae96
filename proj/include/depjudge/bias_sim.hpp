#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "depjudge/dataset.hpp"
#include "depjudge/rng.hpp"

namespace depjudge {

/// Generative parameters of one simulated worker plus their identity.
struct WorkerProfile {
  std::string worker_id;
  double competence_sigma = 0.0;  // std-dev of discretized noise around truth
  double conformity_gamma = 0.0;  // pull strength toward observed others, in [0, 1]
};

/// What a conforming worker pulls toward: the mean of the observed scores,
/// or their mode (sensitivity variant).
enum class ConformityTarget { mean, mode };

enum class ArrivalOrder { random, fixed };

/// How a sequential worker turns a true opinion into a disclosed one:
/// blend  - deterministic rounded mix (1-gamma)*own + gamma*target;
/// kernel - stochastic: copy the rounded target with probability gamma,
///          else disclose truthfully. Matches the inference-side channel.
enum class DisclosureModel { blend, kernel };

struct SimConfig {
  LabelScale scale;
  int n_workers = 0;
  int m_questions = 0;
  std::vector<WorkerProfile> profiles;  // size n_workers
  DatasetMode mode = DatasetMode::two_phase;
  std::uint64_t seed = 0;
  int replications = 1;
  ConformityTarget target = ConformityTarget::mean;
  ArrivalOrder arrival = ArrivalOrder::random;
  DisclosureModel disclosure = DisclosureModel::blend;
  std::vector<int> ground_truth;  // per question index; empty = draw uniform per question
};

/// Throws ConfigInvalid unless all fields are consistent.
void validate_config(const SimConfig& config);

/// One simulated question: its hidden truth, the emitted opinions, and each
/// worker's hidden true opinion.
struct QuestionSim {
  std::string question_id;
  int ground_truth = 0;
  std::vector<OpinionEvent> events;        // sequential mode
  std::vector<TwoPhaseRecord> records;     // two-phase mode
  std::map<std::string, int> true_opinions;
};

struct SimOutput {
  Dataset dataset;
  std::map<std::pair<std::string, std::string>, int> true_opinions;  // (question, worker)
  std::map<std::string, int> ground_truth;
};

/// Profiles w_1..w_n with sigma and gamma drawn uniformly from [lo, hi]
/// (a point value when lo == hi), deterministically from the master seed.
std::vector<WorkerProfile> make_profiles(int n_workers, double sigma_lo, double sigma_hi,
                                         double gamma_lo, double gamma_hi,
                                         std::uint64_t master_seed);

/// clamp(round(truth + N(0, sigma)), 1, k); returns truth exactly at sigma 0.
int sample_true_opinion(int truth_score, double sigma, int k, Rng& rng);

double conformity_target_value(const std::vector<int>& disclosed, ConformityTarget target);

/// First discloser returns the true opinion unchanged; later workers blend
/// toward the target of the previously disclosed scores.
int disclose_sequential(int true_opinion, const std::vector<int>& previously_disclosed,
                        double gamma, int k, ConformityTarget target = ConformityTarget::mean);

/// Simulates one question under the sequential protocol. Draws, in order:
/// ground truth (unless fixed), the arrival permutation, then per arriving
/// worker the true opinion and (kernel mode only) the disclosure coin.
QuestionSim run_sequential(const SimConfig& config, int question_index,
                           const std::string& question_id, Rng& rng);

/// Simulates one question under the two-phase protocol: independent phase-1
/// priors, then posteriors pulled toward the target of all priors.
QuestionSim run_two_phase(const SimConfig& config, int question_index,
                          const std::string& question_id, Rng& rng);

/// All questions of one replication, with question ids spanning replications
/// (replication r owns indices r*m .. r*m + m - 1). Each question runs on a
/// child seed derived from (seed, replication, question).
SimOutput run_replication(const SimConfig& config, int replication);

}  // namespace depjudge
