#include "depjudge/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "depjudge/experiment.hpp"
#include "depjudge/io.hpp"

namespace depjudge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ScaleOptions {
  int k = 0;  // 0 = not set
  std::string file;
};

void add_scale_options(CLI::App* cmd, ScaleOptions& options) {
  cmd->add_option("--scale", options.k, "Generic numeric scale with k labels (default: the 7-point review scale)")
      ->check(CLI::Range(2, 1000));
  cmd->add_option("--scale-file", options.file, "Scale file, one label per line, worst first")
      ->excludes("--scale");
}

LabelScale resolve_scale(const ScaleOptions& options) {
  if (!options.file.empty()) return parse_scale_file(options.file);
  if (options.k > 0) return LabelScale::numeric(options.k);
  return LabelScale::review7();
}

DatasetMode parse_mode(const std::string& name) {
  if (name == "sequential") return DatasetMode::sequential;
  if (name == "two-phase") return DatasetMode::two_phase;
  throw Error(Errc::usage_error, "mode must be 'sequential' or 'two-phase', got '" + name + "'");
}

ConformityTarget parse_target(const std::string& name) {
  if (name == "mean") return ConformityTarget::mean;
  if (name == "mode") return ConformityTarget::mode;
  throw Error(Errc::usage_error, "target must be 'mean' or 'mode', got '" + name + "'");
}

/// Reads the first record of a dataset file to tell sequential from
/// two-phase by its fields.
DatasetMode sniff_mode(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_not_found, "cannot open '" + path.string() + "'");
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    const json record = json::parse(text, nullptr, false);
    if (record.is_object()) {
      if (record.contains("prior_label")) return DatasetMode::two_phase;
      if (record.contains("label")) return DatasetMode::sequential;
    }
    throw Error(Errc::parse_error, path.string() + ":" + std::to_string(line) +
                                       ": record is neither sequential nor two-phase");
  }
  throw Error(Errc::empty_dataset, "'" + path.string() + "' holds no records");
}

// ---------------------------------------------------------------- simulate

struct SimOptions {
  std::string config_file;
  int workers = 5;
  int questions = 10;
  ScaleOptions scale;
  std::string mode = "two-phase";
  std::uint64_t seed = 0;
  int replications = 1;
  double gamma = 0.5;
  double gamma_min = -1.0, gamma_max = -1.0;
  double sigma = 1.0;
  double sigma_min = -1.0, sigma_max = -1.0;
  std::string target = "mean";
  std::string arrival = "random";
  std::string disclosure = "blend";
  // report stage
  double epsilon = kDefaultEpsilon;
  double r_cap = kDefaultReliabilityCap;
  std::string weight_source = "per-question";
  std::size_t limit = kDefaultEnumerationLimit;
  std::string out_dir;
};

void add_sim_options(CLI::App* cmd, SimOptions& options) {
  cmd->add_option("--config", options.config_file, "JSON simulation config; flags override its fields");
  cmd->add_option("--workers", options.workers, "Number of crowd workers")->check(CLI::PositiveNumber);
  cmd->add_option("--questions", options.questions, "Number of questions")->check(CLI::PositiveNumber);
  add_scale_options(cmd, options.scale);
  cmd->add_option("--mode", options.mode, "Elicitation protocol: sequential or two-phase");
  cmd->add_option("--seed", options.seed, "64-bit master seed");
  cmd->add_option("--replications", options.replications, "Independent replications")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", options.gamma, "Conformity for every worker, in [0, 1]");
  cmd->add_option("--gamma-min", options.gamma_min, "Lower end of per-worker conformity range");
  cmd->add_option("--gamma-max", options.gamma_max, "Upper end of per-worker conformity range");
  cmd->add_option("--sigma", options.sigma, "Competence noise std-dev for every worker");
  cmd->add_option("--sigma-min", options.sigma_min, "Lower end of per-worker noise range");
  cmd->add_option("--sigma-max", options.sigma_max, "Upper end of per-worker noise range");
  cmd->add_option("--target", options.target, "Conformity target: mean or mode");
  cmd->add_option("--arrival", options.arrival, "Arrival order: random or fixed");
  cmd->add_option("--disclosure", options.disclosure, "Sequential disclosure: blend or kernel");
  cmd->add_option("--epsilon", options.epsilon, "Ratio smoothing constant")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--r-cap", options.r_cap, "Reliability cap")->check(CLI::PositiveNumber);
  cmd->add_option("--weight-source", options.weight_source,
                  "Weights for the weighted method: per-question or per-worker");
  cmd->add_option("--limit", options.limit, "Max workers per question for exact inversion");
  cmd->add_option("--out", options.out_dir, "Output directory")->required();
}

double json_number(const json& value, const std::string& field) {
  if (!value.is_number()) throw Error(Errc::config_invalid, "'" + field + "' must be a number");
  return value.get<double>();
}

WeightSource parse_weight_source(const std::string& name) {
  if (name == "per-question") return WeightSource::per_question;
  if (name == "per-worker") return WeightSource::per_worker;
  throw Error(Errc::usage_error,
              "weight-source must be 'per-question' or 'per-worker', got '" + name + "'");
}

ArrivalOrder parse_arrival(const std::string& name) {
  if (name == "random") return ArrivalOrder::random;
  if (name == "fixed") return ArrivalOrder::fixed;
  throw Error(Errc::usage_error, "arrival must be 'random' or 'fixed', got '" + name + "'");
}

DisclosureModel parse_disclosure(const std::string& name) {
  if (name == "blend") return DisclosureModel::blend;
  if (name == "kernel") return DisclosureModel::kernel;
  throw Error(Errc::usage_error, "disclosure must be 'blend' or 'kernel', got '" + name + "'");
}

/// Folds a JSON config file into the flag defaults. Explicitly supplied
/// flags win over the file.
void apply_config_file(const CLI::App* cmd, SimOptions& options) {
  std::ifstream in(options.config_file);
  if (!in) throw Error(Errc::file_not_found, "cannot open '" + options.config_file + "'");
  json config = json::parse(in, nullptr, false);
  if (config.is_discarded() || !config.is_object()) {
    throw Error(Errc::config_invalid, "'" + options.config_file + "' is not a JSON object");
  }

  const auto flag_given = [&](const std::string& name) { return cmd->count(name) > 0; };
  for (const auto& [key, value] : config.items()) {
    if (key == "workers" && !flag_given("--workers")) {
      options.workers = static_cast<int>(json_number(value, key));
    } else if (key == "questions" && !flag_given("--questions")) {
      options.questions = static_cast<int>(json_number(value, key));
    } else if (key == "mode" && !flag_given("--mode")) {
      options.mode = value.get<std::string>();
    } else if (key == "seed" && !flag_given("--seed")) {
      options.seed = value.get<std::uint64_t>();
    } else if (key == "replications" && !flag_given("--replications")) {
      options.replications = static_cast<int>(json_number(value, key));
    } else if (key == "target" && !flag_given("--target")) {
      options.target = value.get<std::string>();
    } else if (key == "arrival" && !flag_given("--arrival")) {
      options.arrival = value.get<std::string>();
    } else if (key == "disclosure" && !flag_given("--disclosure")) {
      options.disclosure = value.get<std::string>();
    } else if (key == "gamma" && !flag_given("--gamma") && !flag_given("--gamma-min")) {
      if (value.is_object()) {
        options.gamma_min = json_number(value.at("min"), "gamma.min");
        options.gamma_max = json_number(value.at("max"), "gamma.max");
      } else {
        options.gamma = json_number(value, key);
      }
    } else if (key == "sigma" && !flag_given("--sigma") && !flag_given("--sigma-min")) {
      if (value.is_object()) {
        options.sigma_min = json_number(value.at("min"), "sigma.min");
        options.sigma_max = json_number(value.at("max"), "sigma.max");
      } else {
        options.sigma = json_number(value, key);
      }
    } else if (key == "scale" && !flag_given("--scale") && !flag_given("--scale-file")) {
      if (value.is_number_integer()) {
        options.scale.k = value.get<int>();
      } else if (value.is_array()) {
        // Handled in build_sim_config via the parsed labels.
      } else {
        throw Error(Errc::config_invalid, "'scale' must be an integer or a label array");
      }
    }
  }
}

SimConfig build_sim_config(const CLI::App* cmd, SimOptions& options) {
  json config_json;
  if (!options.config_file.empty()) {
    apply_config_file(cmd, options);
    std::ifstream in(options.config_file);
    config_json = json::parse(in);
  }

  SimConfig config;
  if (config_json.contains("scale") && config_json["scale"].is_array() &&
      options.scale.k == 0 && options.scale.file.empty()) {
    config.scale = LabelScale::from_labels(config_json["scale"].get<std::vector<std::string>>());
  } else {
    config.scale = resolve_scale(options.scale);
  }
  config.mode = parse_mode(options.mode);
  config.seed = options.seed;
  config.replications = options.replications;
  config.m_questions = options.questions;
  config.target = parse_target(options.target);
  config.arrival = parse_arrival(options.arrival);
  config.disclosure = parse_disclosure(options.disclosure);

  if (config_json.contains("profiles")) {
    for (const char* flag : {"--workers", "--gamma", "--gamma-min", "--gamma-max", "--sigma",
                             "--sigma-min", "--sigma-max"}) {
      if (cmd->count(flag) > 0) {
        throw Error(Errc::usage_error,
                    std::string(flag) + " conflicts with the config file's explicit profiles");
      }
    }
    for (const auto& entry : config_json["profiles"]) {
      WorkerProfile profile;
      profile.worker_id = entry.at("worker_id").get<std::string>();
      profile.competence_sigma = json_number(entry.at("sigma"), "profiles.sigma");
      profile.conformity_gamma = json_number(entry.at("gamma"), "profiles.gamma");
      config.profiles.push_back(std::move(profile));
    }
    config.n_workers = static_cast<int>(config.profiles.size());
  } else {
    if ((options.gamma_min >= 0.0) != (options.gamma_max >= 0.0)) {
      throw Error(Errc::usage_error, "give both --gamma-min and --gamma-max");
    }
    if ((options.sigma_min >= 0.0) != (options.sigma_max >= 0.0)) {
      throw Error(Errc::usage_error, "give both --sigma-min and --sigma-max");
    }
    config.n_workers = options.workers;
    const double gamma_lo = options.gamma_min >= 0.0 ? options.gamma_min : options.gamma;
    const double gamma_hi = options.gamma_max >= 0.0 ? options.gamma_max : gamma_lo;
    const double sigma_lo = options.sigma_min >= 0.0 ? options.sigma_min : options.sigma;
    const double sigma_hi = options.sigma_max >= 0.0 ? options.sigma_max : sigma_lo;
    if (gamma_hi < gamma_lo || sigma_hi < sigma_lo) {
      throw Error(Errc::usage_error, "range upper bounds must not undercut the lower bounds");
    }
    config.profiles =
        make_profiles(config.n_workers, sigma_lo, sigma_hi, gamma_lo, gamma_hi, config.seed);
  }

  if (config_json.contains("ground_truth")) {
    for (const auto& label : config_json["ground_truth"]) {
      config.ground_truth.push_back(config.scale.encode(label.get<std::string>()));
    }
  }

  validate_config(config);
  return config;
}

void write_experiment_reports(const fs::path& dir, const SimConfig& config,
                              const ExperimentResult& result) {
  if (config.mode == DatasetMode::two_phase) {
    write_metrics_csv(dir / "metrics.csv", result.metrics);
    write_summary_csv(dir / "metrics_summary.csv", result.metrics);
  }
  write_consensus_csv(dir / "consensus.csv", result.consensus);
  write_recovery_csv(dir / "recovery.csv", result.recovery);
  if (result.debias) write_debias_csv(dir / "debias.csv", *result.debias);
}

int cmd_simulate(const CLI::App* cmd, SimOptions& options) {
  const SimConfig config = build_sim_config(cmd, options);
  const ExperimentResult result = run_experiment(config, parse_weight_source(options.weight_source),
                                                 options.epsilon, options.r_cap, options.limit);

  const fs::path dir(options.out_dir);
  fs::create_directories(dir);
  write_scale_file(dir / "scale.txt", config.scale);
  if (config.mode == DatasetMode::sequential) {
    write_sequential_file(dir / "sequential.jsonl", result.combined);
  } else {
    write_two_phase_file(dir / "twophase.jsonl", result.combined);
  }
  write_truth_file(dir / "truth.jsonl", result.ground_truth, config.scale);
  write_true_opinions_file(dir / "true_opinions.jsonl", result.true_opinions, config.scale);
  write_experiment_reports(dir, config, result);

  std::cout << "simulated " << result.combined.m() << " questions x " << result.combined.n()
            << " workers (" << mode_name(config.mode) << ", seed " << config.seed << ") into "
            << dir.string() << "\n";
  return 0;
}

// ----------------------------------------------------------------- metrics

struct MetricsOptions {
  std::string in_file;
  ScaleOptions scale;
  double epsilon = kDefaultEpsilon;
  double r_cap = kDefaultReliabilityCap;
  std::string out_file;
  std::string summary_file;
};

fs::path default_summary_path(const fs::path& out) {
  return out.parent_path() / (out.stem().string() + "_summary" + out.extension().string());
}

int cmd_metrics(MetricsOptions& options) {
  const LabelScale scale = resolve_scale(options.scale);
  const Dataset dataset = parse_two_phase_file(options.in_file, scale);
  const MetricsReport report = compute_metrics(dataset, options.epsilon, options.r_cap);

  const fs::path out(options.out_file);
  const fs::path summary =
      options.summary_file.empty() ? default_summary_path(out) : fs::path(options.summary_file);
  write_metrics_csv(out, report);
  write_summary_csv(summary, report);
  std::cout << "wrote " << report.per_question.size() << " metric rows to " << out.string()
            << " and " << report.summaries.size() << " worker summaries to " << summary.string()
            << "\n";
  return 0;
}

// --------------------------------------------------------------- aggregate

struct AggregateOptions {
  std::string in_file;
  ScaleOptions scale;
  double epsilon = kDefaultEpsilon;
  double r_cap = kDefaultReliabilityCap;
  std::string weight_source = "per-question";
  std::string truth_file;
  std::string recovery_file;
  std::string out_file;
};

int cmd_aggregate(AggregateOptions& options) {
  if (!options.truth_file.empty() && options.recovery_file.empty()) {
    throw Error(Errc::usage_error, "--truth needs --recovery-out");
  }
  if (options.truth_file.empty() && !options.recovery_file.empty()) {
    throw Error(Errc::usage_error, "--recovery-out needs --truth");
  }
  const LabelScale scale = resolve_scale(options.scale);
  const DatasetMode mode = sniff_mode(options.in_file);

  std::vector<ConsensusResult> results;
  if (mode == DatasetMode::two_phase) {
    const Dataset dataset = parse_two_phase_file(options.in_file, scale);
    const MetricsReport metrics = compute_metrics(dataset, options.epsilon, options.r_cap);
    results = aggregate_two_phase(dataset, metrics, parse_weight_source(options.weight_source));
  } else {
    const Dataset dataset = parse_sequential_file(options.in_file, scale);
    results = aggregate_sequential(dataset);
  }
  write_consensus_csv(options.out_file, results);
  std::cout << "wrote " << results.size() << " consensus rows to " << options.out_file << "\n";

  if (!options.truth_file.empty()) {
    const auto truth = parse_truth_file(options.truth_file, scale);
    const auto recovery = evaluate_recovery(results, truth, scale);
    write_recovery_csv(options.recovery_file, recovery);
    std::cout << "wrote recovery for " << recovery.size() << " methods to "
              << options.recovery_file << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------- infer

struct InferOptions {
  std::string in_file;
  ScaleOptions scale;
  double gamma = -1.0;
  std::string gammas_file;
  std::string target = "mean";
  std::size_t limit = kDefaultEnumerationLimit;
  std::string out_file;
  std::string map_file;
};

std::map<std::string, double> resolve_gammas(const InferOptions& options,
                                             const std::vector<std::string>& workers) {
  std::map<std::string, double> gammas;
  if (!options.gammas_file.empty()) gammas = parse_gammas_file(options.gammas_file);
  for (const auto& worker : workers) {
    if (gammas.count(worker)) continue;
    if (options.gamma < 0.0) {
      throw Error(Errc::config_invalid,
                  "no gamma for worker '" + worker + "'; give --gamma or list it in --gammas-file");
    }
    gammas[worker] = options.gamma;
  }
  return gammas;
}

std::vector<QuestionPosterior> invert_dataset(const Dataset& dataset,
                                              const std::map<std::string, double>& gammas,
                                              ConformityTarget target, std::size_t limit) {
  std::vector<QuestionPosterior> posteriors;
  std::size_t begin = 0;
  while (begin < dataset.events.size()) {
    const std::string& question = dataset.events[begin].question_id;
    std::size_t end = begin;
    while (end < dataset.events.size() && dataset.events[end].question_id == question) ++end;

    QuestionPosterior entry;
    entry.question_id = question;
    BiasModel bias;
    bias.scale = dataset.scale;
    bias.target = target;
    std::vector<int> disclosed;
    for (std::size_t i = begin; i < end; ++i) {
      entry.worker_ids.push_back(dataset.events[i].worker_id);
      bias.gammas.push_back(gammas.at(dataset.events[i].worker_id));
      disclosed.push_back(dataset.events[i].score);
    }
    if (disclosed.size() > limit) {
      throw Error(Errc::enumeration_too_large,
                  "question '" + question + "' has " + std::to_string(disclosed.size()) +
                      " workers; the exact inversion limit is " + std::to_string(limit));
    }
    entry.table = posterior_true(bias, uniform_priors(disclosed.size(), dataset.scale.k()),
                                 disclosed, limit);
    posteriors.push_back(std::move(entry));
    begin = end;
  }
  return posteriors;
}

int cmd_infer(InferOptions& options) {
  const LabelScale scale = resolve_scale(options.scale);
  const Dataset dataset = parse_sequential_file(options.in_file, scale);
  if (options.gamma > 1.0) throw Error(Errc::usage_error, "--gamma must lie in [0, 1]");
  const auto gammas = resolve_gammas(options, dataset.worker_ids);

  const auto posteriors =
      invert_dataset(dataset, gammas, parse_target(options.target), options.limit);
  write_posterior_csv(options.out_file, posteriors);
  std::cout << "wrote posteriors for " << posteriors.size() << " questions to "
            << options.out_file << "\n";
  if (!options.map_file.empty()) {
    write_map_csv(options.map_file, posteriors, scale);
    std::cout << "wrote MAP readout to " << options.map_file << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  SimOptions sim;
  std::string in_file;
  std::string truth_file;
  std::string true_opinions_file;
  double gamma = -1.0;
  std::string gammas_file;
};

int cmd_evaluate(const CLI::App* cmd, EvaluateOptions& options) {
  const fs::path dir(options.sim.out_dir);
  fs::create_directories(dir);

  if (options.in_file.empty()) {
    // Self-contained: simulate, then evaluate everything the mode supports.
    const SimConfig config = build_sim_config(cmd, options.sim);
    const ExperimentResult result =
        run_experiment(config, parse_weight_source(options.sim.weight_source),
                       options.sim.epsilon, options.sim.r_cap, options.sim.limit);
    write_experiment_reports(dir, config, result);
    for (const auto& row : result.recovery) {
      std::cout << method_name(row.method) << ": match rate " << format_number(row.exact_match_rate)
                << ", mae " << format_number(row.mae) << "\n";
    }
    if (result.debias) {
      std::cout << "map readout match rate " << format_number(result.debias->map_match_rate)
                << " vs face value " << format_number(result.debias->face_value_match_rate)
                << " over " << result.debias->opinions << " opinions\n";
    }
    return 0;
  }

  const LabelScale scale = resolve_scale(options.sim.scale);
  const DatasetMode mode = sniff_mode(options.in_file);
  std::vector<ConsensusResult> results;
  if (mode == DatasetMode::two_phase) {
    const Dataset dataset = parse_two_phase_file(options.in_file, scale);
    const MetricsReport metrics =
        compute_metrics(dataset, options.sim.epsilon, options.sim.r_cap);
    write_metrics_csv(dir / "metrics.csv", metrics);
    write_summary_csv(dir / "metrics_summary.csv", metrics);
    results = aggregate_two_phase(dataset, metrics, parse_weight_source(options.sim.weight_source));
  } else {
    const Dataset dataset = parse_sequential_file(options.in_file, scale);
    results = aggregate_sequential(dataset);
    if (!options.true_opinions_file.empty()) {
      const auto true_opinions = parse_true_opinions_file(options.true_opinions_file, scale);
      InferOptions gamma_options;
      gamma_options.gamma = options.gamma;
      gamma_options.gammas_file = options.gammas_file;
      const auto gammas = resolve_gammas(gamma_options, dataset.worker_ids);
      const DebiasReport debias =
          debias_comparison(dataset, true_opinions, gammas,
                            parse_target(options.sim.target), options.sim.limit);
      write_debias_csv(dir / "debias.csv", debias);
      std::cout << "map readout match rate " << format_number(debias.map_match_rate)
                << " vs face value " << format_number(debias.face_value_match_rate) << " over "
                << debias.opinions << " opinions\n";
    }
  }
  write_consensus_csv(dir / "consensus.csv", results);

  if (!options.truth_file.empty()) {
    const auto truth = parse_truth_file(options.truth_file, scale);
    const auto recovery = evaluate_recovery(results, truth, scale);
    write_recovery_csv(dir / "recovery.csv", recovery);
    for (const auto& row : recovery) {
      std::cout << method_name(row.method) << ": match rate " << format_number(row.exact_match_rate)
                << ", mae " << format_number(row.mae) << "\n";
    }
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Consensus engine and simulator for dependent crowd opinions"};
  app.require_subcommand(1);

  SimOptions simulate_options;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Generate a biased-opinion dataset with known ground truth");
  add_sim_options(simulate_cmd, simulate_options);

  MetricsOptions metrics_options;
  auto* metrics_cmd =
      app.add_subcommand("metrics", "Worker drop/reliability/accuracy tables from two-phase data");
  metrics_cmd->add_option("--in", metrics_options.in_file, "Two-phase dataset (JSONL)")->required();
  add_scale_options(metrics_cmd, metrics_options.scale);
  metrics_cmd->add_option("--epsilon", metrics_options.epsilon, "Ratio smoothing constant")
      ->check(CLI::PositiveNumber);
  metrics_cmd->add_option("--r-cap", metrics_options.r_cap, "Reliability cap")
      ->check(CLI::PositiveNumber);
  metrics_cmd->add_option("--out", metrics_options.out_file, "Per-question metrics CSV")->required();
  metrics_cmd->add_option("--summary-out", metrics_options.summary_file,
                          "Per-worker summary CSV (default: <out>_summary.csv)");

  AggregateOptions aggregate_options;
  auto* aggregate_cmd = app.add_subcommand("aggregate", "Consensus per question, all methods");
  aggregate_cmd->add_option("--in", aggregate_options.in_file, "Dataset (JSONL)")->required();
  add_scale_options(aggregate_cmd, aggregate_options.scale);
  aggregate_cmd->add_option("--epsilon", aggregate_options.epsilon, "Ratio smoothing constant")
      ->check(CLI::PositiveNumber);
  aggregate_cmd->add_option("--r-cap", aggregate_options.r_cap, "Reliability cap")
      ->check(CLI::PositiveNumber);
  aggregate_cmd->add_option("--weight-source", aggregate_options.weight_source,
                            "per-question or per-worker");
  aggregate_cmd->add_option("--truth", aggregate_options.truth_file, "Ground-truth file (JSONL)");
  aggregate_cmd->add_option("--recovery-out", aggregate_options.recovery_file,
                            "Recovery report CSV (needs --truth)");
  aggregate_cmd->add_option("--out", aggregate_options.out_file, "Consensus CSV")->required();

  InferOptions infer_options;
  auto* infer_cmd =
      app.add_subcommand("infer", "Exact posterior over true opinions for sequential data");
  infer_cmd->add_option("--in", infer_options.in_file, "Sequential dataset (JSONL)")->required();
  add_scale_options(infer_cmd, infer_options.scale);
  infer_cmd->add_option("--gamma", infer_options.gamma, "Conformity for workers not in --gammas-file");
  infer_cmd->add_option("--gammas-file", infer_options.gammas_file,
                        "CSV 'worker_id,gamma' with per-worker conformity");
  infer_cmd->add_option("--target", infer_options.target, "Conformity target: mean or mode");
  infer_cmd->add_option("--limit", infer_options.limit, "Max workers per question");
  infer_cmd->add_option("--out", infer_options.out_file, "Posterior table CSV")->required();
  infer_cmd->add_option("--map-out", infer_options.map_file, "MAP readout CSV");

  EvaluateOptions evaluate_options;
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "End-to-end method comparison, simulated or from files");
  add_sim_options(evaluate_cmd, evaluate_options.sim);
  evaluate_cmd->add_option("--in", evaluate_options.in_file,
                           "Evaluate this dataset instead of simulating");
  evaluate_cmd->add_option("--truth", evaluate_options.truth_file, "Ground-truth file (JSONL)");
  evaluate_cmd->add_option("--true-opinions", evaluate_options.true_opinions_file,
                           "Hidden true opinions (JSONL), enables the debias report");
  evaluate_cmd->add_option("--gamma-for-infer", evaluate_options.gamma,
                           "Conformity used when inverting an existing sequential dataset");
  evaluate_cmd->add_option("--gammas-file", evaluate_options.gammas_file,
                           "CSV 'worker_id,gamma' used when inverting");

  std::vector<const char*> argv;
  argv.push_back("depjudge");
  for (const auto& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (simulate_cmd->parsed()) return cmd_simulate(simulate_cmd, simulate_options);
    if (metrics_cmd->parsed()) return cmd_metrics(metrics_options);
    if (aggregate_cmd->parsed()) return cmd_aggregate(aggregate_options);
    if (infer_cmd->parsed()) return cmd_infer(infer_options);
    if (evaluate_cmd->parsed()) return cmd_evaluate(evaluate_cmd, evaluate_options);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace depjudge
