#include "depjudge/truth_inference.hpp"

#include <algorithm>
#include <cmath>

namespace depjudge {

namespace {

void check_scores(const std::vector<int>& scores, int k, const char* which) {
  for (const int score : scores) {
    if (score < 1 || score > k) {
      throw Error(Errc::score_out_of_range, std::string(which) + " score " +
                                                std::to_string(score) + " outside 1.." +
                                                std::to_string(k));
    }
  }
}

void check_model(const BiasModel& bias, std::size_t n_workers) {
  if (bias.gammas.size() != n_workers) {
    throw Error(Errc::length_mismatch, std::to_string(bias.gammas.size()) + " gammas for " +
                                           std::to_string(n_workers) + " workers");
  }
  for (const double gamma : bias.gammas) {
    if (gamma < 0.0 || gamma > 1.0) {
      throw Error(Errc::config_invalid, "gamma outside [0, 1]");
    }
  }
}

}  // namespace

int kernel_copy_value(const BiasModel& bias, const std::vector<int>& history) {
  const double pull = conformity_target_value(history, bias.target);
  return std::clamp(static_cast<int>(std::llround(pull)), 1, bias.scale.k());
}

double kernel_prob(const BiasModel& bias, std::size_t position, int disclosed, int true_opinion,
                   const std::vector<int>& history) {
  if (history.empty()) return disclosed == true_opinion ? 1.0 : 0.0;
  const double gamma = bias.gammas.at(position);
  double prob = 0.0;
  if (disclosed == kernel_copy_value(bias, history)) prob += gamma;
  if (disclosed == true_opinion) prob += 1.0 - gamma;
  return prob;
}

int sample_disclosure(const BiasModel& bias, std::size_t position, int true_opinion,
                      const std::vector<int>& history, Rng& rng) {
  if (history.empty()) return true_opinion;
  const double coin = rng.uniform_real();
  return coin < bias.gammas.at(position) ? kernel_copy_value(bias, history) : true_opinion;
}

double sequence_likelihood(const BiasModel& bias, const std::vector<int>& true_vector,
                           const std::vector<int>& disclosed_vector) {
  if (true_vector.size() != disclosed_vector.size()) {
    throw Error(Errc::length_mismatch, std::to_string(true_vector.size()) + " true vs " +
                                           std::to_string(disclosed_vector.size()) +
                                           " disclosed scores");
  }
  const int k = bias.scale.k();
  check_scores(true_vector, k, "true");
  check_scores(disclosed_vector, k, "disclosed");
  check_model(bias, true_vector.size());

  double likelihood = 1.0;
  std::vector<int> history;
  history.reserve(true_vector.size());
  for (std::size_t i = 0; i < true_vector.size(); ++i) {
    likelihood *= kernel_prob(bias, i, disclosed_vector[i], true_vector[i], history);
    history.push_back(disclosed_vector[i]);
  }
  return likelihood;
}

std::vector<std::vector<double>> uniform_priors(std::size_t n_workers, int k) {
  return std::vector<std::vector<double>>(
      n_workers, std::vector<double>(static_cast<std::size_t>(k), 1.0 / static_cast<double>(k)));
}

bool enumeration_feasible(int k, std::size_t n_workers, std::size_t enumeration_limit,
                          double max_states) {
  return n_workers <= enumeration_limit &&
         std::pow(static_cast<double>(k), static_cast<double>(n_workers)) <= max_states;
}

PosteriorTable posterior_true(const BiasModel& bias,
                              const std::vector<std::vector<double>>& priors,
                              const std::vector<int>& disclosed_vector,
                              std::size_t enumeration_limit, double max_states) {
  const std::size_t n = disclosed_vector.size();
  const int k = bias.scale.k();
  if (n == 0) throw Error(Errc::empty_input, "no disclosed scores to invert");
  check_scores(disclosed_vector, k, "disclosed");
  check_model(bias, n);
  if (priors.size() != n) {
    throw Error(Errc::length_mismatch,
                std::to_string(priors.size()) + " priors for " + std::to_string(n) + " workers");
  }
  for (const auto& prior : priors) {
    if (prior.size() != static_cast<std::size_t>(k)) {
      throw Error(Errc::length_mismatch, "prior row length differs from k");
    }
    double mass = 0.0;
    for (const double p : prior) {
      if (p < 0.0) throw Error(Errc::config_invalid, "negative prior probability");
      mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-9) {
      throw Error(Errc::config_invalid, "prior row does not sum to 1");
    }
  }
  if (!enumeration_feasible(k, n, enumeration_limit, max_states)) {
    throw Error(Errc::enumeration_too_large,
                std::to_string(n) + " workers at k=" + std::to_string(k) +
                    " exceeds the enumeration budget");
  }

  // Per-worker kernel factors depend only on the observed disclosed prefix,
  // so precompute D_i(disclosed_i | o, prefix_i) for every candidate o.
  std::vector<std::vector<double>> factor(n, std::vector<double>(static_cast<std::size_t>(k)));
  std::vector<int> history;
  for (std::size_t i = 0; i < n; ++i) {
    for (int o = 1; o <= k; ++o) {
      factor[i][static_cast<std::size_t>(o - 1)] =
          kernel_prob(bias, i, disclosed_vector[i], o, history) *
          priors[i][static_cast<std::size_t>(o - 1)];
    }
    history.push_back(disclosed_vector[i]);
  }

  PosteriorTable table;
  table.k = k;
  table.disclosed = disclosed_vector;
  table.marginals.assign(n, std::vector<double>(static_cast<std::size_t>(k), 0.0));

  // Odometer over candidate true vectors, last worker fastest.
  std::vector<int> candidate(n, 1);
  double total = 0.0;
  bool running = true;
  while (running) {
    double weight = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      weight *= factor[i][static_cast<std::size_t>(candidate[i] - 1)];
    }
    if (weight != 0.0) {
      total += weight;
      for (std::size_t i = 0; i < n; ++i) {
        table.marginals[i][static_cast<std::size_t>(candidate[i] - 1)] += weight;
      }
    }

    running = false;
    for (std::size_t digit = n; digit > 0;) {
      --digit;
      if (candidate[digit] < k) {
        ++candidate[digit];
        running = true;
        break;
      }
      candidate[digit] = 1;
    }
  }

  if (total == 0.0) {
    throw Error(Errc::zero_evidence,
                "the disclosed sequence has probability zero under the bias model");
  }
  for (auto& marginal : table.marginals) {
    for (double& p : marginal) p /= total;
  }
  return table;
}

std::vector<int> map_true_opinions(const PosteriorTable& table) {
  std::vector<int> map_scores;
  map_scores.reserve(table.marginals.size());
  for (std::size_t i = 0; i < table.marginals.size(); ++i) {
    const auto& marginal = table.marginals[i];
    const int disclosed = table.disclosed[i];
    int best = 1;
    double best_prob = marginal[0];
    for (int score = 2; score <= table.k; ++score) {
      const double prob = marginal[static_cast<std::size_t>(score - 1)];
      // Strictly greater wins; an exact tie only switches to the disclosed
      // score (ascending scan already prefers the lower score).
      if (prob > best_prob || (prob == best_prob && score == disclosed && best != disclosed)) {
        best = score;
        best_prob = prob;
      }
    }
    map_scores.push_back(best);
  }
  return map_scores;
}

}  // namespace depjudge
