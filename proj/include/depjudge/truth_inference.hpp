#pragma once

#include <cstddef>
#include <vector>

#include "depjudge/bias_sim.hpp"
#include "depjudge/label_scale.hpp"
#include "depjudge/rng.hpp"

namespace depjudge {

inline constexpr std::size_t kDefaultEnumerationLimit = 8;
inline constexpr double kDefaultMaxStates = 1e7;

/// Disclosure channel for one question's arrival sequence. gammas[i] belongs
/// to the i-th arriving worker. The kernel D_i(disclosed | true, history):
/// identity when the history is empty; otherwise disclose the clamped
/// rounded history target with probability gamma_i and the true opinion
/// with probability 1 - gamma_i.
struct BiasModel {
  LabelScale scale;
  std::vector<double> gammas;
  ConformityTarget target = ConformityTarget::mean;
};

/// clamp(round(target(history))), the value a fully conforming worker copies.
int kernel_copy_value(const BiasModel& bias, const std::vector<int>& history);

/// D_position(disclosed | true_opinion, history).
double kernel_prob(const BiasModel& bias, std::size_t position, int disclosed, int true_opinion,
                   const std::vector<int>& history);

/// Draws a disclosed score from the kernel.
int sample_disclosure(const BiasModel& bias, std::size_t position, int true_opinion,
                      const std::vector<int>& history, Rng& rng);

/// Probability of the disclosed sequence given a candidate true-opinion
/// vector: the product over workers of the kernel, each conditioned on the
/// observed disclosed prefix.
double sequence_likelihood(const BiasModel& bias, const std::vector<int>& true_vector,
                           const std::vector<int>& disclosed_vector);

/// Per-worker posterior marginals over true opinions, aligned with the
/// disclosed arrival sequence they condition on.
struct PosteriorTable {
  int k = 0;
  std::vector<int> disclosed;
  std::vector<std::vector<double>> marginals;  // [position][score - 1]
};

std::vector<std::vector<double>> uniform_priors(std::size_t n_workers, int k);

/// Whether an n-worker, k-label question fits the enumeration budget.
bool enumeration_feasible(int k, std::size_t n_workers,
                          std::size_t enumeration_limit = kDefaultEnumerationLimit,
                          double max_states = kDefaultMaxStates);

/// Exact posterior over true opinions by enumerating all k^n candidate
/// vectors (the last worker's digit advances fastest; weights accumulate in
/// enumeration order). Throws EnumerationTooLarge beyond the limits and
/// ZeroEvidence when the disclosed sequence has probability zero under the
/// model.
PosteriorTable posterior_true(const BiasModel& bias,
                              const std::vector<std::vector<double>>& priors,
                              const std::vector<int>& disclosed_vector,
                              std::size_t enumeration_limit = kDefaultEnumerationLimit,
                              double max_states = kDefaultMaxStates);

/// Per-worker argmax of the posterior; ties break toward the disclosed
/// score, then toward the lower score.
std::vector<int> map_true_opinions(const PosteriorTable& table);

}  // namespace depjudge
