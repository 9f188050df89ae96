#include "depjudge/experiment.hpp"

#include <algorithm>

namespace depjudge {

DebiasReport debias_comparison(
    const Dataset& dataset,
    const std::map<std::pair<std::string, std::string>, int>& true_opinions,
    const std::map<std::string, double>& gammas_by_worker, ConformityTarget target,
    std::size_t enumeration_limit) {
  if (dataset.mode != DatasetMode::sequential) {
    throw Error(Errc::wrong_mode, "debiasing needs a sequential dataset");
  }

  DebiasReport report;
  int map_matches = 0;
  int face_matches = 0;

  std::size_t begin = 0;
  while (begin < dataset.events.size()) {
    const std::string& question = dataset.events[begin].question_id;
    std::size_t end = begin;
    while (end < dataset.events.size() && dataset.events[end].question_id == question) ++end;

    BiasModel bias;
    bias.scale = dataset.scale;
    bias.target = target;
    std::vector<int> disclosed;
    std::vector<const OpinionEvent*> ordered;
    for (std::size_t i = begin; i < end; ++i) ordered.push_back(&dataset.events[i]);
    for (const auto* event : ordered) {
      const auto it = gammas_by_worker.find(event->worker_id);
      if (it == gammas_by_worker.end()) {
        throw Error(Errc::config_invalid, "no gamma for worker '" + event->worker_id + "'");
      }
      bias.gammas.push_back(it->second);
      disclosed.push_back(event->score);
    }

    const auto posterior = posterior_true(bias, uniform_priors(disclosed.size(), bias.scale.k()),
                                          disclosed, enumeration_limit);
    const auto map_scores = map_true_opinions(posterior);

    for (std::size_t i = 0; i < ordered.size(); ++i) {
      const auto it = true_opinions.find({question, ordered[i]->worker_id});
      if (it == true_opinions.end()) {
        throw Error(Errc::missing_truth, "no true opinion for (" + question + ", " +
                                             ordered[i]->worker_id + ")");
      }
      if (map_scores[i] == it->second) ++map_matches;
      if (disclosed[i] == it->second) ++face_matches;
      ++report.opinions;
    }
    ++report.questions;
    begin = end;
  }

  if (report.opinions > 0) {
    report.map_match_rate = static_cast<double>(map_matches) / report.opinions;
    report.face_value_match_rate = static_cast<double>(face_matches) / report.opinions;
  }
  return report;
}

ExperimentResult run_experiment(const SimConfig& config, WeightSource weight_source,
                                double epsilon, double r_cap, std::size_t enumeration_limit) {
  validate_config(config);

  ExperimentResult result;
  std::vector<RawSequentialRecord> raw_events;
  std::vector<RawTwoPhaseRecord> raw_records;
  for (int r = 0; r < config.replications; ++r) {
    SimOutput output = run_replication(config, r);
    result.ground_truth.insert(output.ground_truth.begin(), output.ground_truth.end());
    result.true_opinions.insert(output.true_opinions.begin(), output.true_opinions.end());
    for (const auto& event : output.dataset.events) {
      raw_events.push_back({event.question_id, event.worker_id, event.order_index,
                            config.scale.decode(event.score), event.timestamp});
    }
    for (const auto& record : output.dataset.records) {
      raw_records.push_back({record.question_id, record.worker_id,
                             config.scale.decode(record.prior_score),
                             config.scale.decode(record.posterior_score)});
    }
    result.replications.push_back(std::move(output));
  }

  result.combined = config.mode == DatasetMode::sequential
                        ? validate_dataset(raw_events, config.scale)
                        : validate_dataset(raw_records, config.scale);

  if (config.mode == DatasetMode::two_phase) {
    result.metrics = compute_metrics(result.combined, epsilon, r_cap);
    result.consensus = aggregate_two_phase(result.combined, result.metrics, weight_source);
  } else {
    result.consensus = aggregate_sequential(result.combined);
    if (enumeration_feasible(config.scale.k(), static_cast<std::size_t>(config.n_workers),
                             enumeration_limit)) {
      std::map<std::string, double> gammas;
      for (const auto& profile : config.profiles) {
        gammas[profile.worker_id] = profile.conformity_gamma;
      }
      result.debias = debias_comparison(result.combined, result.true_opinions, gammas,
                                        config.target, enumeration_limit);
    }
  }
  result.recovery = evaluate_recovery(result.consensus, result.ground_truth, config.scale);
  return result;
}

}  // namespace depjudge
