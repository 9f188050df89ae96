#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <set>
#include <string>

#include "depjudge/cli.hpp"
#include "depjudge/experiment.hpp"
#include "depjudge/io.hpp"
#include "depjudge/rng.hpp"
#include "test_support.hpp"

using namespace depjudge;
using testutil::slurp;
using testutil::spit;
using testutil::TempDir;
using testutil::thrown_code;

namespace fs = std::filesystem;

namespace {

Dataset random_sequential(Rng& rng, const LabelScale& scale) {
  std::vector<RawSequentialRecord> raw;
  const int questions = rng.uniform_int(1, 5);
  for (int q = 0; q < questions; ++q) {
    const int workers = rng.uniform_int(1, 6);
    for (int w = 0; w < workers; ++w) {
      RawSequentialRecord record{"q" + std::to_string(q), "w" + std::to_string(w), w,
                                 scale.decode(rng.uniform_int(1, scale.k())), std::nullopt};
      if (rng.uniform_real() < 0.5) record.timestamp = rng.uniform_real() * 1000.0;
      raw.push_back(std::move(record));
    }
  }
  return validate_dataset(raw, scale);
}

Dataset random_two_phase(Rng& rng, const LabelScale& scale) {
  std::vector<RawTwoPhaseRecord> raw;
  const int questions = rng.uniform_int(1, 5);
  for (int q = 0; q < questions; ++q) {
    const int workers = rng.uniform_int(1, 6);
    for (int w = 0; w < workers; ++w) {
      raw.push_back({"q" + std::to_string(q), "w" + std::to_string(w),
                     scale.decode(rng.uniform_int(1, scale.k())),
                     scale.decode(rng.uniform_int(1, scale.k()))});
    }
  }
  return validate_dataset(raw, scale);
}

/// Byte-compares every regular file of two directories.
void check_directories_identical(const fs::path& a, const fs::path& b) {
  std::set<std::string> names_a, names_b;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.is_regular_file()) names_a.insert(fs::relative(entry.path(), a).string());
  }
  for (const auto& entry : fs::recursive_directory_iterator(b)) {
    if (entry.is_regular_file()) names_b.insert(fs::relative(entry.path(), b).string());
  }
  CHECK(names_a == names_b);
  for (const auto& name : names_a) {
    CHECK_MESSAGE(slurp(a / name) == slurp(b / name), "file differs: ", name);
  }
}

}  // namespace

TEST_CASE("sequential files round-trip") {
  const auto scale = LabelScale::review7();
  TempDir dir;
  Rng rng(1001);
  for (int trial = 0; trial < 25; ++trial) {
    const Dataset dataset = random_sequential(rng, scale);
    const auto path = dir.file("seq.jsonl");
    write_sequential_file(path, dataset);
    CHECK(parse_sequential_file(path, scale) == dataset);
  }
}

TEST_CASE("two-phase files round-trip") {
  const auto scale = LabelScale::review7();
  TempDir dir;
  Rng rng(1002);
  for (int trial = 0; trial < 25; ++trial) {
    const Dataset dataset = random_two_phase(rng, scale);
    const auto path = dir.file("two.jsonl");
    write_two_phase_file(path, dataset);
    CHECK(parse_two_phase_file(path, scale) == dataset);
  }
}

TEST_CASE("truth and scale files round-trip") {
  const auto scale = LabelScale::review7();
  TempDir dir;
  const std::map<std::string, int> truth = {{"q1", 3}, {"q2", 7}, {"q3", 1}};
  write_truth_file(dir.file("truth.jsonl"), truth, scale);
  CHECK(parse_truth_file(dir.file("truth.jsonl"), scale) == truth);

  write_scale_file(dir.file("scale.txt"), scale);
  CHECK(parse_scale_file(dir.file("scale.txt")) == scale);
}

TEST_CASE("parse errors carry the line number") {
  const auto scale = LabelScale::review7();
  TempDir dir;

  const auto missing_label = dir.file("bad.jsonl");
  spit(missing_label, R"({"question_id":"q1","worker_id":"w1","order_index":0})" "\n");
  try {
    parse_sequential_file(missing_label, scale);
    FAIL("expected ParseError");
  } catch (const Error& error) {
    CHECK(error.code() == Errc::parse_error);
    CHECK(std::string(error.what()).find(":1:") != std::string::npos);
    CHECK(std::string(error.what()).find("label") != std::string::npos);
  }

  const auto bad_label = dir.file("bad2.jsonl");
  spit(bad_label,
       R"({"question_id":"q1","worker_id":"w1","prior_label":"accept","posterior_label":"nope"})"
       "\n");
  try {
    parse_two_phase_file(bad_label, scale);
    FAIL("expected UnknownLabel");
  } catch (const Error& error) {
    CHECK(error.code() == Errc::unknown_label);
    CHECK(std::string(error.what()).find(":1:") != std::string::npos);
  }

  const auto bad_json = dir.file("bad3.jsonl");
  spit(bad_json, "{\"question_id\": q1}\n");
  CHECK(thrown_code([&] { parse_sequential_file(bad_json, scale); }) == Errc::parse_error);

  CHECK(thrown_code([&] { parse_sequential_file(dir.file("absent.jsonl"), scale); }) ==
        Errc::file_not_found);
}

TEST_CASE("order_index may be omitted uniformly per question") {
  const auto scale = LabelScale::review7();
  TempDir dir;
  const auto path = dir.file("seq.jsonl");
  spit(path,
       R"({"question_id":"q1","worker_id":"w2","label":"accept"})" "\n"
       R"({"question_id":"q1","worker_id":"w1","label":"reject"})" "\n"
       R"({"question_id":"q2","worker_id":"w1","order_index":0,"label":"borderline"})" "\n");
  const auto dataset = parse_sequential_file(path, scale);
  REQUIRE(dataset.events.size() == 3);
  // File order becomes arrival order for q1.
  CHECK(dataset.events[0].worker_id == "w2");
  CHECK(dataset.events[0].order_index == 0);
  CHECK(dataset.events[1].worker_id == "w1");
  CHECK(dataset.events[1].order_index == 1);

  spit(path,
       R"({"question_id":"q1","worker_id":"w2","label":"accept"})" "\n"
       R"({"question_id":"q1","worker_id":"w1","order_index":1,"label":"reject"})" "\n");
  CHECK(thrown_code([&] { parse_sequential_file(path, scale); }) == Errc::parse_error);
}

TEST_CASE("simulate accepts a JSON config file with explicit profiles") {
  TempDir dir;
  const auto config_path = dir.file("sim.json");
  spit(config_path, R"({
    "scale": 5,
    "questions": 6,
    "mode": "two-phase",
    "seed": 99,
    "ground_truth": ["3", "3", "3", "3", "3", "3"],
    "profiles": [
      {"worker_id": "alice", "sigma": 0.0, "gamma": 0.0},
      {"worker_id": "bob", "sigma": 1.0, "gamma": 0.7}
    ]
  })");
  const auto out = dir.file("out");
  REQUIRE(run_cli({"simulate", "--config", config_path.string(), "--out", out.string()}) == 0);
  const auto scale = parse_scale_file(out / "scale.txt");
  CHECK(scale.k() == 5);
  const auto dataset = parse_two_phase_file(out / "twophase.jsonl", scale);
  CHECK(dataset.n() == 2);
  CHECK(dataset.m() == 6);
  CHECK(dataset.worker_ids == std::vector<std::string>{"alice", "bob"});

  const auto truth = parse_truth_file(out / "truth.jsonl", scale);
  for (const auto& [question, score] : truth) CHECK(score == 3);
  // alice is noiseless and unbiased: her records pin the fixed truth.
  for (const auto& record : dataset.records) {
    if (record.worker_id != "alice") continue;
    CHECK(record.prior_score == 3);
    CHECK(record.posterior_score == 3);
  }
}

TEST_CASE("flags override config file fields") {
  TempDir dir;
  const auto config_path = dir.file("sim.json");
  spit(config_path, R"({"workers": 7, "questions": 9, "seed": 1})");
  const auto out = dir.file("out");
  REQUIRE(run_cli({"simulate", "--config", config_path.string(), "--questions", "4", "--out",
                   out.string()}) == 0);
  const auto scale = parse_scale_file(out / "scale.txt");
  const auto dataset = parse_two_phase_file(out / "twophase.jsonl", scale);
  CHECK(dataset.m() == 4);   // flag wins
  CHECK(dataset.n() == 7);   // config survives
}

TEST_CASE("conflicting simulation options are rejected") {
  TempDir dir;
  const auto config_path = dir.file("sim.json");
  spit(config_path, R"({"profiles": [{"worker_id": "w1", "sigma": 0.0, "gamma": 0.0},
                                     {"worker_id": "w2", "sigma": 0.0, "gamma": 0.0}]})");
  CHECK(run_cli({"simulate", "--config", config_path.string(), "--workers", "5", "--out",
                 dir.file("x").string()}) != 0);
  CHECK(run_cli({"simulate", "--config", config_path.string(), "--gamma", "0.5", "--out",
                 dir.file("x").string()}) != 0);
  CHECK(run_cli({"simulate", "--gamma-min", "0.2", "--out", dir.file("x").string()}) != 0);
  CHECK(run_cli({"simulate", "--gamma-min", "0.8", "--gamma-max", "0.2", "--out",
                 dir.file("x").string()}) != 0);
  // The config alone is fine.
  CHECK(run_cli({"simulate", "--config", config_path.string(), "--out",
                 dir.file("ok").string()}) == 0);
}

TEST_CASE("evaluate can simulate on its own") {
  TempDir dir;
  const auto out = dir.file("eval");
  REQUIRE(run_cli({"evaluate", "--mode", "sequential", "--workers", "4", "--questions", "8",
                   "--seed", "3", "--gamma", "0.7", "--disclosure", "kernel", "--out",
                   out.string()}) == 0);
  CHECK(fs::exists(out / "consensus.csv"));
  CHECK(fs::exists(out / "recovery.csv"));
  CHECK(fs::exists(out / "debias.csv"));
  const auto debias = slurp(out / "debias.csv");
  CHECK(debias.find("readout,match_rate,opinions") != std::string::npos);
  CHECK(debias.find("map,") != std::string::npos);
  CHECK(debias.find("face-value,") != std::string::npos);
}

TEST_CASE("gammas file parsing") {
  TempDir dir;
  const auto path = dir.file("gammas.csv");
  spit(path, "worker_id,gamma\nw1,0.25\nw2,1\n");
  const auto gammas = parse_gammas_file(path);
  CHECK(gammas.at("w1") == 0.25);
  CHECK(gammas.at("w2") == 1.0);

  spit(path, "worker,g\nw1,0.5\n");
  CHECK(thrown_code([&] { parse_gammas_file(path); }) == Errc::parse_error);
  spit(path, "worker_id,gamma\nw1,1.5\n");
  CHECK(thrown_code([&] { parse_gammas_file(path); }) == Errc::parse_error);
  spit(path, "worker_id,gamma\nw1,abc\n");
  CHECK(thrown_code([&] { parse_gammas_file(path); }) == Errc::parse_error);
}

TEST_CASE("simulate is byte-deterministic") {
  TempDir dir;
  const auto out_a = dir.file("a");
  const auto out_b = dir.file("b");
  const std::vector<std::string> base = {"simulate", "--workers", "5",     "--questions", "10",
                                         "--seed",   "42",        "--gamma-min", "0.1",  "--gamma-max",
                                         "0.9"};
  auto args_a = base;
  args_a.insert(args_a.end(), {"--out", out_a.string()});
  auto args_b = base;
  args_b.insert(args_b.end(), {"--out", out_b.string()});
  REQUIRE(run_cli(args_a) == 0);
  REQUIRE(run_cli(args_b) == 0);
  check_directories_identical(out_a, out_b);
}

TEST_CASE("metrics command reproduces the single-worker example") {
  TempDir dir;
  const auto data = dir.file("two.jsonl");
  spit(data,
       R"({"question_id":"q1","worker_id":"w1","prior_label":"weak reject","posterior_label":"weak reject"})"
       "\n");
  const auto out = dir.file("m.csv");
  REQUIRE(run_cli({"metrics", "--in", data.string(), "--out", out.string()}) == 0);
  const auto csv = slurp(out);
  CHECK(csv.find("worker_id,question_id,drop,deviation_ratio,reliability,accuracy,weight") !=
        std::string::npos);
  CHECK(csv.find("w1,q1,0,1,1,1,0.5") != std::string::npos);
  CHECK(fs::exists(dir.file("m_summary.csv")));
}

TEST_CASE("infer with gamma zero emits point-mass posteriors") {
  TempDir dir;
  const auto data = dir.file("seq.jsonl");
  spit(data,
       R"({"question_id":"q1","worker_id":"w1","order_index":0,"label":"reject"})" "\n"
       R"({"question_id":"q1","worker_id":"w2","order_index":1,"label":"accept"})" "\n");
  const auto out = dir.file("post.csv");
  const auto map_out = dir.file("map.csv");
  REQUIRE(run_cli({"infer", "--in", data.string(), "--gamma", "0", "--out", out.string(),
                   "--map-out", map_out.string()}) == 0);
  const auto csv = slurp(out);
  CHECK(csv.find("q1,w1,2,1\n") != std::string::npos);   // reject = score 2, probability 1
  CHECK(csv.find("q1,w1,3,0\n") != std::string::npos);
  CHECK(csv.find("q1,w2,6,1\n") != std::string::npos);   // accept = score 6
  const auto map_csv = slurp(map_out);
  CHECK(map_csv.find("q1,w1,2,reject") != std::string::npos);
  CHECK(map_csv.find("q1,w2,6,accept") != std::string::npos);
}

TEST_CASE("cli error paths exit nonzero") {
  TempDir dir;
  CHECK(run_cli({"bogus-command"}) != 0);
  CHECK(run_cli({"simulate", "--does-not-exist", "1", "--out", dir.file("x").string()}) != 0);
  CHECK(run_cli({"metrics", "--in", dir.file("absent.jsonl").string(), "--out",
                 dir.file("m.csv").string()}) != 0);
  CHECK(run_cli({"aggregate", "--in", dir.file("absent.jsonl").string(), "--out",
                 dir.file("c.csv").string()}) != 0);
  // --truth without --recovery-out is a usage error.
  const auto data = dir.file("two.jsonl");
  spit(data,
       R"({"question_id":"q1","worker_id":"w1","prior_label":"accept","posterior_label":"accept"})"
       "\n");
  CHECK(run_cli({"aggregate", "--in", data.string(), "--truth", data.string(), "--out",
                 dir.file("c.csv").string()}) != 0);
}

TEST_CASE("emitted dataset files are re-ingestible") {
  TempDir dir;
  for (const std::string mode : {"sequential", "two-phase"}) {
    const auto out = dir.file(mode);
    REQUIRE(run_cli({"simulate", "--mode", mode, "--workers", "4", "--questions", "6", "--seed",
                     "9", "--out", out.string()}) == 0);
    const auto scale = parse_scale_file(out / "scale.txt");
    if (mode == "sequential") {
      const auto dataset = parse_sequential_file(out / "sequential.jsonl", scale);
      CHECK(dataset.m() == 6);
      CHECK(dataset.n() == 4);
    } else {
      const auto dataset = parse_two_phase_file(out / "twophase.jsonl", scale);
      CHECK(dataset.m() == 6);
      CHECK(dataset.n() == 4);
    }
    CHECK(parse_truth_file(out / "truth.jsonl", scale).size() == 6);
    CHECK(parse_true_opinions_file(out / "true_opinions.jsonl", scale).size() == 24);
  }
}

TEST_CASE("evaluate from files matches evaluate from simulation") {
  TempDir dir;
  const auto sim_dir = dir.file("sim");
  REQUIRE(run_cli({"simulate", "--workers", "5", "--questions", "12", "--seed", "77", "--gamma",
                   "0.6", "--out", sim_dir.string()}) == 0);
  const auto eval_dir = dir.file("eval");
  REQUIRE(run_cli({"evaluate", "--in", (sim_dir / "twophase.jsonl").string(), "--truth",
                   (sim_dir / "truth.jsonl").string(), "--out", eval_dir.string()}) == 0);
  // The simulate run wrote the same reports; they must agree byte for byte.
  CHECK(slurp(eval_dir / "consensus.csv") == slurp(sim_dir / "consensus.csv"));
  CHECK(slurp(eval_dir / "recovery.csv") == slurp(sim_dir / "recovery.csv"));
  CHECK(slurp(eval_dir / "metrics.csv") == slurp(sim_dir / "metrics.csv"));
}

TEST_CASE("evaluate sequential files reproduces the simulate reports") {
  TempDir dir;
  const auto sim_dir = dir.file("sim");
  REQUIRE(run_cli({"simulate", "--mode", "sequential", "--workers", "4", "--questions", "6",
                   "--seed", "21", "--gamma", "0.5", "--disclosure", "kernel", "--out",
                   sim_dir.string()}) == 0);
  const auto eval_dir = dir.file("eval");
  REQUIRE(run_cli({"evaluate", "--in", (sim_dir / "sequential.jsonl").string(), "--truth",
                   (sim_dir / "truth.jsonl").string(), "--true-opinions",
                   (sim_dir / "true_opinions.jsonl").string(), "--gamma-for-infer", "0.5",
                   "--out", eval_dir.string()}) == 0);
  CHECK(slurp(eval_dir / "debias.csv") == slurp(sim_dir / "debias.csv"));
  CHECK(slurp(eval_dir / "recovery.csv") == slurp(sim_dir / "recovery.csv"));
  CHECK(slurp(eval_dir / "consensus.csv") == slurp(sim_dir / "consensus.csv"));
}

TEST_CASE("a custom scale file drives a whole run") {
  TempDir dir;
  const auto scale_path = dir.file("scale.txt");
  spit(scale_path, "cold\nlukewarm\nhot\n");
  const auto data = dir.file("two.jsonl");
  spit(data,
       R"({"question_id":"q1","worker_id":"w1","prior_label":"cold","posterior_label":"lukewarm"})"
       "\n"
       R"({"question_id":"q1","worker_id":"w2","prior_label":"hot","posterior_label":"hot"})"
       "\n");
  const auto out = dir.file("c.csv");
  REQUIRE(run_cli({"aggregate", "--in", data.string(), "--scale-file", scale_path.string(),
                   "--out", out.string()}) == 0);
  const auto csv = slurp(out);
  // Mean 2.5 ties and rounds away from the k=3 midpoint of 2; the modal tie
  // breaks toward the lower score.
  CHECK(csv.find("q1,unweighted-mean,2.5,hot") != std::string::npos);
  CHECK(csv.find("q1,majority,2,lukewarm") != std::string::npos);
}

TEST_CASE("scale flags select the label set") {
  TempDir dir;
  const auto out = dir.file("k3");
  REQUIRE(run_cli({"simulate", "--scale", "3", "--workers", "3", "--questions", "4", "--seed",
                   "5", "--out", out.string()}) == 0);
  const auto scale = parse_scale_file(out / "scale.txt");
  CHECK(scale.k() == 3);
  CHECK(scale.labels() == std::vector<std::string>{"1", "2", "3"});
}
