#include "depjudge/bias_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace depjudge {

namespace {

// Seed-stream tags so profile generation and question simulation never share
// a child seed.
constexpr std::uint64_t kProfileStream = 0x70726f66;  // "prof"

int clamp_round(double value, int k) {
  return std::clamp(static_cast<int>(std::llround(value)), 1, k);
}

std::string zero_padded(int value, int width) {
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(digits.begin(), static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return digits;
}

int digits_of(int value) { return static_cast<int>(std::to_string(value).size()); }

}  // namespace

void validate_config(const SimConfig& config) {
  if (config.scale.k() < 2) throw Error(Errc::config_invalid, "scale has fewer than 2 labels");
  if (config.n_workers < 1) throw Error(Errc::config_invalid, "need at least one worker");
  if (config.m_questions < 1) throw Error(Errc::config_invalid, "need at least one question");
  if (config.replications < 1) throw Error(Errc::config_invalid, "replications must be >= 1");
  if (static_cast<int>(config.profiles.size()) != config.n_workers) {
    throw Error(Errc::config_invalid,
                std::to_string(config.profiles.size()) + " profiles for " +
                    std::to_string(config.n_workers) + " workers");
  }
  for (const auto& profile : config.profiles) {
    if (profile.competence_sigma < 0.0) {
      throw Error(Errc::config_invalid, "negative sigma for worker '" + profile.worker_id + "'");
    }
    if (profile.conformity_gamma < 0.0 || profile.conformity_gamma > 1.0) {
      throw Error(Errc::config_invalid,
                  "gamma outside [0, 1] for worker '" + profile.worker_id + "'");
    }
  }
  if (!config.ground_truth.empty()) {
    if (static_cast<int>(config.ground_truth.size()) != config.m_questions) {
      throw Error(Errc::config_invalid, "fixed ground truth must list one score per question");
    }
    for (const int score : config.ground_truth) {
      if (score < 1 || score > config.scale.k()) {
        throw Error(Errc::config_invalid,
                    "ground-truth score " + std::to_string(score) + " outside the scale");
      }
    }
  }
}

std::vector<WorkerProfile> make_profiles(int n_workers, double sigma_lo, double sigma_hi,
                                         double gamma_lo, double gamma_hi,
                                         std::uint64_t master_seed) {
  const int width = digits_of(n_workers);
  std::vector<WorkerProfile> profiles;
  profiles.reserve(static_cast<std::size_t>(n_workers));
  for (int i = 0; i < n_workers; ++i) {
    Rng rng(derive_seed(master_seed, kProfileStream, static_cast<std::uint64_t>(i)));
    WorkerProfile profile;
    profile.worker_id = "w" + zero_padded(i + 1, width);
    profile.competence_sigma = sigma_lo + rng.uniform_real() * (sigma_hi - sigma_lo);
    profile.conformity_gamma = gamma_lo + rng.uniform_real() * (gamma_hi - gamma_lo);
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

int sample_true_opinion(int truth_score, double sigma, int k, Rng& rng) {
  if (sigma == 0.0) return truth_score;
  return clamp_round(static_cast<double>(truth_score) + rng.gaussian(0.0, sigma), k);
}

double conformity_target_value(const std::vector<int>& disclosed, ConformityTarget target) {
  if (target == ConformityTarget::mean) {
    return std::accumulate(disclosed.begin(), disclosed.end(), 0.0) /
           static_cast<double>(disclosed.size());
  }
  // Modal score; ties toward the score closest to the mean, then lower.
  std::map<int, int> counts;
  for (const int score : disclosed) ++counts[score];
  const double mean = std::accumulate(disclosed.begin(), disclosed.end(), 0.0) /
                      static_cast<double>(disclosed.size());
  int best_count = 0;
  for (const auto& [score, count] : counts) best_count = std::max(best_count, count);
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
  return static_cast<double>(chosen);
}

int disclose_sequential(int true_opinion, const std::vector<int>& previously_disclosed,
                        double gamma, int k, ConformityTarget target) {
  if (previously_disclosed.empty()) return true_opinion;
  const double pull = conformity_target_value(previously_disclosed, target);
  return clamp_round((1.0 - gamma) * static_cast<double>(true_opinion) + gamma * pull, k);
}

namespace {

int draw_ground_truth(const SimConfig& config, int question_index, Rng& rng) {
  if (!config.ground_truth.empty()) {
    return config.ground_truth[static_cast<std::size_t>(question_index)];
  }
  return rng.uniform_int(1, config.scale.k());
}

}  // namespace

QuestionSim run_sequential(const SimConfig& config, int question_index,
                           const std::string& question_id, Rng& rng) {
  const int k = config.scale.k();
  QuestionSim sim;
  sim.question_id = question_id;
  sim.ground_truth = draw_ground_truth(config, question_index, rng);

  std::vector<int> arrival(static_cast<std::size_t>(config.n_workers));
  std::iota(arrival.begin(), arrival.end(), 0);
  if (config.arrival == ArrivalOrder::random) rng.shuffle(arrival);

  std::vector<int> disclosed_so_far;
  for (int position = 0; position < config.n_workers; ++position) {
    const auto& profile = config.profiles[static_cast<std::size_t>(arrival[position])];
    const int true_opinion =
        sample_true_opinion(sim.ground_truth, profile.competence_sigma, k, rng);

    int disclosed;
    if (config.disclosure == DisclosureModel::blend || disclosed_so_far.empty()) {
      disclosed = disclose_sequential(true_opinion, disclosed_so_far, profile.conformity_gamma,
                                      k, config.target);
    } else {
      // Kernel model: copy the rounded target with probability gamma. The
      // coin is drawn for every non-first worker to keep streams aligned
      // across gamma settings.
      const double coin = rng.uniform_real();
      const int copy_value =
          clamp_round(conformity_target_value(disclosed_so_far, config.target), k);
      disclosed = coin < profile.conformity_gamma ? copy_value : true_opinion;
    }

    OpinionEvent event;
    event.question_id = question_id;
    event.worker_id = profile.worker_id;
    event.order_index = position;
    event.score = disclosed;
    sim.events.push_back(std::move(event));
    sim.true_opinions[profile.worker_id] = true_opinion;
    disclosed_so_far.push_back(disclosed);
  }
  return sim;
}

QuestionSim run_two_phase(const SimConfig& config, int question_index,
                          const std::string& question_id, Rng& rng) {
  const int k = config.scale.k();
  QuestionSim sim;
  sim.question_id = question_id;
  sim.ground_truth = draw_ground_truth(config, question_index, rng);

  std::vector<int> priors;
  priors.reserve(static_cast<std::size_t>(config.n_workers));
  for (const auto& profile : config.profiles) {
    priors.push_back(sample_true_opinion(sim.ground_truth, profile.competence_sigma, k, rng));
  }

  // Phase 2 is the same blend as a sequential disclosure, pulled toward the
  // target of all phase-1 priors (own prior included).
  for (int i = 0; i < config.n_workers; ++i) {
    const auto& profile = config.profiles[static_cast<std::size_t>(i)];
    TwoPhaseRecord record;
    record.question_id = question_id;
    record.worker_id = profile.worker_id;
    record.prior_score = priors[static_cast<std::size_t>(i)];
    record.posterior_score = disclose_sequential(record.prior_score, priors,
                                                 profile.conformity_gamma, k, config.target);
    sim.true_opinions[profile.worker_id] = record.prior_score;
    sim.records.push_back(std::move(record));
  }
  return sim;
}

SimOutput run_replication(const SimConfig& config, int replication) {
  validate_config(config);
  const int total_questions = config.m_questions * config.replications;
  const int width = digits_of(total_questions);

  SimOutput output;
  std::vector<RawSequentialRecord> raw_events;
  std::vector<RawTwoPhaseRecord> raw_records;
  for (int q = 0; q < config.m_questions; ++q) {
    const int global_index = replication * config.m_questions + q;
    const std::string question_id = "q" + zero_padded(global_index + 1, width);
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(replication),
                        static_cast<std::uint64_t>(q)));

    QuestionSim sim = config.mode == DatasetMode::sequential
                          ? run_sequential(config, q, question_id, rng)
                          : run_two_phase(config, q, question_id, rng);

    output.ground_truth[question_id] = sim.ground_truth;
    for (const auto& [worker, score] : sim.true_opinions) {
      output.true_opinions[{question_id, worker}] = score;
    }
    for (const auto& event : sim.events) {
      raw_events.push_back({event.question_id, event.worker_id, event.order_index,
                            config.scale.decode(event.score), event.timestamp});
    }
    for (const auto& record : sim.records) {
      raw_records.push_back({record.question_id, record.worker_id,
                             config.scale.decode(record.prior_score),
                             config.scale.decode(record.posterior_score)});
    }
  }

  output.dataset = config.mode == DatasetMode::sequential
                       ? validate_dataset(raw_events, config.scale)
                       : validate_dataset(raw_records, config.scale);
  return output;
}

}  // namespace depjudge
