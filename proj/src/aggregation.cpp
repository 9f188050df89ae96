#include "depjudge/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace depjudge {

namespace {

constexpr double kTieBand = 1e-9;

std::map<std::string, int> posteriors_of_question(const Dataset& dataset, std::size_t begin,
                                                  std::size_t end) {
  std::map<std::string, int> posteriors;
  for (std::size_t i = begin; i < end; ++i) {
    posteriors.emplace(dataset.records[i].worker_id, dataset.records[i].posterior_score);
  }
  return posteriors;
}

ConsensusResult mean_consensus(const std::string& question_id,
                               const std::map<std::string, int>& scores,
                               const std::map<std::string, double>& weights,
                               ConsensusMethod method, const LabelScale& scale) {
  if (scores.empty()) {
    throw Error(Errc::empty_input, "no scores to aggregate for question '" + question_id + "'");
  }
  if (scores.size() != weights.size() ||
      !std::equal(scores.begin(), scores.end(), weights.begin(),
                  [](const auto& s, const auto& w) { return s.first == w.first; })) {
    throw Error(Errc::key_mismatch,
                "posterior and weight keys differ for question '" + question_id + "'");
  }

  ConsensusResult result;
  result.question_id = question_id;
  result.method = method;

  double total = 0.0;
  for (const auto& [worker, weight] : weights) {
    if (weight < 0.0) {
      throw Error(Errc::config_invalid, "negative weight for worker '" + worker + "'");
    }
    total += weight;
  }
  if (total == 0.0) {
    result.uniform_fallback = true;
    for (const auto& [worker, weight] : weights) result.support[worker] = 1.0;
    total = static_cast<double>(weights.size());
  } else {
    result.support = weights;
  }

  double weighted_sum = 0.0;
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  for (const auto& [worker, score] : scores) {
    weighted_sum += result.support.at(worker) * static_cast<double>(score);
    lo = std::min(lo, score);
    hi = std::max(hi, score);
  }
  // The exact quotient lies in [lo, hi]; the clamp only strips float residue.
  result.aggregate_score =
      std::clamp(weighted_sum / total, static_cast<double>(lo), static_cast<double>(hi));
  result.final_label = scale.decode(round_to_scale(result.aggregate_score, scale.k()));
  return result;
}

}  // namespace

const char* method_name(ConsensusMethod method) {
  switch (method) {
    case ConsensusMethod::weighted: return "weighted";
    case ConsensusMethod::unweighted_mean: return "unweighted-mean";
    case ConsensusMethod::prior_mean: return "prior-mean";
    case ConsensusMethod::majority: return "majority";
  }
  return "unknown";
}

int round_to_scale(double aggregate, int k) {
  const double lower = std::floor(aggregate);
  const double frac = aggregate - lower;
  int down = static_cast<int>(lower);
  if (std::abs(frac - 0.5) <= kTieBand) {
    const double midpoint = (static_cast<double>(k) + 1.0) / 2.0;
    const double tie_value = lower + 0.5;
    const int choice = tie_value > midpoint ? down + 1 : down;
    return std::clamp(choice, 1, k);
  }
  const int nearest = frac > 0.5 ? down + 1 : down;
  return std::clamp(nearest, 1, k);
}

ConsensusResult weighted_consensus(const std::string& question_id,
                                   const std::map<std::string, int>& posteriors,
                                   const std::map<std::string, double>& weights,
                                   const LabelScale& scale) {
  return mean_consensus(question_id, posteriors, weights, ConsensusMethod::weighted, scale);
}

ConsensusResult unweighted_mean_consensus(const std::string& question_id,
                                          const std::map<std::string, int>& posteriors,
                                          const LabelScale& scale) {
  std::map<std::string, double> uniform;
  for (const auto& [worker, score] : posteriors) uniform[worker] = 1.0;
  return mean_consensus(question_id, posteriors, uniform, ConsensusMethod::unweighted_mean,
                        scale);
}

ConsensusResult prior_mean_consensus(const std::string& question_id,
                                     const std::map<std::string, int>& priors,
                                     const LabelScale& scale) {
  std::map<std::string, double> uniform;
  for (const auto& [worker, score] : priors) uniform[worker] = 1.0;
  return mean_consensus(question_id, priors, uniform, ConsensusMethod::prior_mean, scale);
}

ConsensusResult majority_consensus(const std::string& question_id,
                                   const std::map<std::string, int>& posteriors,
                                   const LabelScale& scale) {
  if (posteriors.empty()) {
    throw Error(Errc::empty_input, "no scores to aggregate for question '" + question_id + "'");
  }

  std::map<int, int> counts;
  double sum = 0.0;
  for (const auto& [worker, score] : posteriors) {
    ++counts[score];
    sum += static_cast<double>(score);
  }
  const double mean = sum / static_cast<double>(posteriors.size());

  int best_count = 0;
  for (const auto& [score, count] : counts) best_count = std::max(best_count, count);

  // Modal candidates in ascending score order; nearest to the mean wins,
  // lower score on an exact distance tie.
  int chosen = 0;
  double chosen_distance = std::numeric_limits<double>::infinity();
  for (const auto& [score, count] : counts) {
    if (count != best_count) continue;
    const double distance = std::abs(static_cast<double>(score) - mean);
    if (distance < chosen_distance) {
      chosen = score;
      chosen_distance = distance;
    }
  }

  ConsensusResult result;
  result.question_id = question_id;
  result.method = ConsensusMethod::majority;
  result.aggregate_score = static_cast<double>(chosen);
  result.final_label = scale.decode(chosen);
  for (const auto& [worker, score] : posteriors) result.support[worker] = 1.0;
  return result;
}

std::vector<ConsensusResult> aggregate_two_phase(const Dataset& dataset,
                                                 const MetricsReport& metrics,
                                                 WeightSource source) {
  if (dataset.mode != DatasetMode::two_phase) {
    throw Error(Errc::wrong_mode, "aggregate_two_phase needs a two-phase dataset");
  }

  std::map<std::pair<std::string, std::string>, double> question_weight;
  for (const auto& row : metrics.per_question) {
    question_weight[{row.question_id, row.worker_id}] = row.weight;
  }
  std::map<std::string, double> worker_weight;
  for (const auto& summary : metrics.summaries) {
    worker_weight[summary.worker_id] = summary.mean_weight;
  }

  std::vector<ConsensusResult> results;
  std::size_t begin = 0;
  while (begin < dataset.records.size()) {
    const std::string& question = dataset.records[begin].question_id;
    std::size_t end = begin;
    while (end < dataset.records.size() && dataset.records[end].question_id == question) ++end;

    const auto posteriors = posteriors_of_question(dataset, begin, end);
    std::map<std::string, int> priors;
    for (std::size_t i = begin; i < end; ++i) {
      priors.emplace(dataset.records[i].worker_id, dataset.records[i].prior_score);
    }
    std::map<std::string, double> weights;
    for (const auto& [worker, score] : posteriors) {
      weights[worker] = source == WeightSource::per_question
                            ? question_weight.at({question, worker})
                            : worker_weight.at(worker);
    }

    results.push_back(weighted_consensus(question, posteriors, weights, dataset.scale));
    results.push_back(unweighted_mean_consensus(question, posteriors, dataset.scale));
    results.push_back(prior_mean_consensus(question, priors, dataset.scale));
    results.push_back(majority_consensus(question, posteriors, dataset.scale));
    begin = end;
  }
  return results;
}

std::vector<ConsensusResult> aggregate_sequential(const Dataset& dataset) {
  if (dataset.mode != DatasetMode::sequential) {
    throw Error(Errc::wrong_mode, "aggregate_sequential needs a sequential dataset");
  }

  std::vector<ConsensusResult> results;
  std::size_t begin = 0;
  while (begin < dataset.events.size()) {
    const std::string& question = dataset.events[begin].question_id;
    std::size_t end = begin;
    while (end < dataset.events.size() && dataset.events[end].question_id == question) ++end;

    std::map<std::string, int> disclosed;
    for (std::size_t i = begin; i < end; ++i) {
      disclosed.emplace(dataset.events[i].worker_id, dataset.events[i].score);
    }
    results.push_back(unweighted_mean_consensus(question, disclosed, dataset.scale));
    results.push_back(majority_consensus(question, disclosed, dataset.scale));
    begin = end;
  }
  return results;
}

std::vector<RecoveryRow> evaluate_recovery(const std::vector<ConsensusResult>& results,
                                           const std::map<std::string, int>& truth,
                                           const LabelScale& scale) {
  std::map<ConsensusMethod, std::pair<int, double>> matches_and_error;  // count, abs error sum
  std::map<ConsensusMethod, int> totals;
  for (const auto& result : results) {
    const auto it = truth.find(result.question_id);
    if (it == truth.end()) {
      throw Error(Errc::missing_truth, "no ground truth for question '" + result.question_id + "'");
    }
    const int final_score = scale.encode(result.final_label);
    auto& [matches, error_sum] = matches_and_error[result.method];
    if (final_score == it->second) ++matches;
    error_sum += std::abs(static_cast<double>(final_score) - static_cast<double>(it->second));
    ++totals[result.method];
  }

  std::vector<RecoveryRow> rows;
  for (const auto method :
       {ConsensusMethod::weighted, ConsensusMethod::unweighted_mean, ConsensusMethod::prior_mean,
        ConsensusMethod::majority}) {
    const auto it = totals.find(method);
    if (it == totals.end()) continue;
    const auto& [matches, error_sum] = matches_and_error[method];
    RecoveryRow row;
    row.method = method;
    row.exact_match_rate = static_cast<double>(matches) / static_cast<double>(it->second);
    row.mae = error_sum / static_cast<double>(it->second);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace depjudge
