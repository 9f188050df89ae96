#include "depjudge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace depjudge {

namespace {

void check_score(int score, int k, const char* which) {
  if (score < 1 || score > k) {
    throw Error(Errc::score_out_of_range, std::string(which) + " score " +
                                              std::to_string(score) + " outside 1.." +
                                              std::to_string(k));
  }
}

double mean_of(const std::vector<int>& scores) {
  return std::accumulate(scores.begin(), scores.end(), 0.0) /
         static_cast<double>(scores.size());
}

}  // namespace

double drop_of_confidence(int prior_score, int posterior_score, int k) {
  check_score(prior_score, k, "prior");
  check_score(posterior_score, k, "posterior");
  return std::abs(static_cast<double>(prior_score) - static_cast<double>(posterior_score));
}

double mean_shift(const std::vector<int>& priors, const std::vector<int>& posteriors) {
  if (priors.empty()) throw Error(Errc::empty_input, "mean_shift over zero workers");
  if (priors.size() != posteriors.size()) {
    throw Error(Errc::length_mismatch, std::to_string(priors.size()) + " priors vs " +
                                           std::to_string(posteriors.size()) + " posteriors");
  }
  return std::abs(mean_of(priors) - mean_of(posteriors));
}

double deviation_ratio(double drop, double shift, double epsilon) {
  return (drop + epsilon) / (shift + epsilon);
}

double reliability(double deviation_ratio, double r_cap) {
  return std::min(1.0 / deviation_ratio, r_cap);
}

double accuracy(int posterior_score, const std::vector<int>& all_posteriors, int k) {
  if (all_posteriors.empty()) throw Error(Errc::empty_input, "accuracy over zero posteriors");
  check_score(posterior_score, k, "posterior");
  const double distance = std::abs(static_cast<double>(posterior_score) - mean_of(all_posteriors));
  return 1.0 - distance / static_cast<double>(k - 1);
}

double worker_weight(double reliability, double accuracy) {
  return reliability / (1.0 + reliability) * accuracy;
}

MetricsReport compute_metrics(const Dataset& dataset, double epsilon, double r_cap) {
  if (dataset.mode != DatasetMode::two_phase) {
    throw Error(Errc::wrong_mode, "metrics need a two-phase dataset, got sequential");
  }
  const int k = dataset.scale.k();

  MetricsReport report;
  // Records are already sorted by (question_id, worker_id); walk one
  // question's block at a time.
  std::map<std::string, std::vector<double>> drops, reliabilities, accuracies, weights;
  std::size_t begin = 0;
  while (begin < dataset.records.size()) {
    std::size_t end = begin;
    while (end < dataset.records.size() &&
           dataset.records[end].question_id == dataset.records[begin].question_id) {
      ++end;
    }

    std::vector<int> priors, posteriors;
    priors.reserve(end - begin);
    posteriors.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      priors.push_back(dataset.records[i].prior_score);
      posteriors.push_back(dataset.records[i].posterior_score);
    }
    const double shift = mean_shift(priors, posteriors);

    for (std::size_t i = begin; i < end; ++i) {
      const auto& record = dataset.records[i];
      WorkerQuestionMetrics row;
      row.worker_id = record.worker_id;
      row.question_id = record.question_id;
      row.drop = drop_of_confidence(record.prior_score, record.posterior_score, k);
      row.deviation_ratio = deviation_ratio(row.drop, shift, epsilon);
      row.reliability = reliability(row.deviation_ratio, r_cap);
      row.accuracy = accuracy(record.posterior_score, posteriors, k);
      row.weight = worker_weight(row.reliability, row.accuracy);
      drops[row.worker_id].push_back(row.drop);
      reliabilities[row.worker_id].push_back(row.reliability);
      accuracies[row.worker_id].push_back(row.accuracy);
      weights[row.worker_id].push_back(row.weight);
      report.per_question.push_back(std::move(row));
    }
    begin = end;
  }

  auto mean = [](const std::vector<double>& values) {
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  };
  for (const auto& [worker, worker_drops] : drops) {
    WorkerSummary summary;
    summary.worker_id = worker;
    summary.mean_drop = mean(worker_drops);
    summary.mean_reliability = mean(reliabilities[worker]);
    summary.mean_accuracy = mean(accuracies[worker]);
    summary.mean_weight = mean(weights[worker]);
    report.summaries.push_back(std::move(summary));
  }
  return report;
}

}  // namespace depjudge
