#include "depjudge/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace depjudge {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_number(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_not_found, "cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::file_not_found, "cannot write '" + path.string() + "'");
  return out;
}

[[noreturn]] void parse_fail(const fs::path& path, int line, const std::string& what) {
  throw Error(Errc::parse_error, path.string() + ":" + std::to_string(line) + ": " + what);
}

ordered_json parse_line(const fs::path& path, int line, const std::string& text) {
  ordered_json record = ordered_json::parse(text, nullptr, false);
  if (record.is_discarded()) parse_fail(path, line, "invalid JSON");
  if (!record.is_object()) parse_fail(path, line, "expected a JSON object");
  return record;
}

std::string require_string(const fs::path& path, int line, const ordered_json& record,
                           const char* field) {
  const auto it = record.find(field);
  if (it == record.end()) parse_fail(path, line, std::string("missing field '") + field + "'");
  if (!it->is_string()) parse_fail(path, line, std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

int require_int(const fs::path& path, int line, const ordered_json& record, const char* field) {
  const auto it = record.find(field);
  if (it == record.end()) parse_fail(path, line, std::string("missing field '") + field + "'");
  if (!it->is_number_integer()) {
    parse_fail(path, line, std::string("field '") + field + "' must be an integer");
  }
  return it->get<int>();
}

int encode_checked(const fs::path& path, int line, const LabelScale& scale,
                   const std::string& label) {
  // Re-raise with the file position attached.
  try {
    return scale.encode(label);
  } catch (const Error&) {
    throw Error(Errc::unknown_label,
                path.string() + ":" + std::to_string(line) + ": unknown label '" + label + "'");
  }
}

template <typename Fn>
void for_each_line(const fs::path& path, Fn&& fn) {
  auto in = open_input(path);
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    fn(line, text);
  }
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string escaped = "\"";
  for (const char c : field) {
    if (c == '"') escaped += '"';
    escaped += c;
  }
  escaped += '"';
  return escaped;
}

}  // namespace

Dataset parse_sequential_file(const fs::path& path, const LabelScale& scale) {
  // order_index may be omitted, but only uniformly per question; arrival
  // order is then the file order.
  std::vector<RawSequentialRecord> raw;
  std::map<std::string, std::pair<int, int>> order_presence;  // question -> (with, without)
  std::map<std::string, int> next_rank;
  for_each_line(path, [&](int line, const std::string& text) {
    const auto record = parse_line(path, line, text);
    RawSequentialRecord row;
    row.question_id = require_string(path, line, record, "question_id");
    row.worker_id = require_string(path, line, record, "worker_id");
    const bool with_order = record.contains("order_index");
    if (with_order) {
      row.order_index = require_int(path, line, record, "order_index");
      ++order_presence[row.question_id].first;
    } else {
      row.order_index = next_rank[row.question_id];
      ++order_presence[row.question_id].second;
    }
    ++next_rank[row.question_id];
    const std::string label = require_string(path, line, record, "label");
    encode_checked(path, line, scale, label);
    row.label = label;
    if (const auto it = record.find("timestamp"); it != record.end() && !it->is_null()) {
      if (!it->is_number()) parse_fail(path, line, "field 'timestamp' must be a number");
      row.timestamp = it->get<double>();
      if (*row.timestamp < 0.0) parse_fail(path, line, "field 'timestamp' must be nonnegative");
    }
    raw.push_back(std::move(row));
  });
  for (const auto& [question, presence] : order_presence) {
    if (presence.first > 0 && presence.second > 0) {
      throw Error(Errc::parse_error,
                  path.string() + ": question '" + question +
                      "' mixes records with and without order_index");
    }
  }
  return validate_dataset(raw, scale);
}

Dataset parse_two_phase_file(const fs::path& path, const LabelScale& scale) {
  std::vector<RawTwoPhaseRecord> raw;
  for_each_line(path, [&](int line, const std::string& text) {
    const auto record = parse_line(path, line, text);
    RawTwoPhaseRecord row;
    row.question_id = require_string(path, line, record, "question_id");
    row.worker_id = require_string(path, line, record, "worker_id");
    row.prior_label = require_string(path, line, record, "prior_label");
    row.posterior_label = require_string(path, line, record, "posterior_label");
    encode_checked(path, line, scale, row.prior_label);
    encode_checked(path, line, scale, row.posterior_label);
    raw.push_back(std::move(row));
  });
  return validate_dataset(raw, scale);
}

void write_sequential_file(const fs::path& path, const Dataset& dataset) {
  auto out = open_output(path);
  for (const auto& event : dataset.events) {
    ordered_json record;
    record["question_id"] = event.question_id;
    record["worker_id"] = event.worker_id;
    record["order_index"] = event.order_index;
    record["label"] = dataset.scale.decode(event.score);
    if (event.timestamp) record["timestamp"] = *event.timestamp;
    out << record.dump() << '\n';
  }
}

void write_two_phase_file(const fs::path& path, const Dataset& dataset) {
  auto out = open_output(path);
  for (const auto& row : dataset.records) {
    ordered_json record;
    record["question_id"] = row.question_id;
    record["worker_id"] = row.worker_id;
    record["prior_label"] = dataset.scale.decode(row.prior_score);
    record["posterior_label"] = dataset.scale.decode(row.posterior_score);
    out << record.dump() << '\n';
  }
}

std::map<std::string, int> parse_truth_file(const fs::path& path, const LabelScale& scale) {
  std::map<std::string, int> truth;
  for_each_line(path, [&](int line, const std::string& text) {
    const auto record = parse_line(path, line, text);
    const std::string question = require_string(path, line, record, "question_id");
    const std::string label = require_string(path, line, record, "truth_label");
    if (!truth.emplace(question, encode_checked(path, line, scale, label)).second) {
      parse_fail(path, line, "duplicate truth for question '" + question + "'");
    }
  });
  return truth;
}

void write_truth_file(const fs::path& path, const std::map<std::string, int>& truth,
                      const LabelScale& scale) {
  auto out = open_output(path);
  for (const auto& [question, score] : truth) {
    ordered_json record;
    record["question_id"] = question;
    record["truth_label"] = scale.decode(score);
    out << record.dump() << '\n';
  }
}

std::map<std::pair<std::string, std::string>, int> parse_true_opinions_file(
    const fs::path& path, const LabelScale& scale) {
  std::map<std::pair<std::string, std::string>, int> opinions;
  for_each_line(path, [&](int line, const std::string& text) {
    const auto record = parse_line(path, line, text);
    const std::string question = require_string(path, line, record, "question_id");
    const std::string worker = require_string(path, line, record, "worker_id");
    const std::string label = require_string(path, line, record, "true_label");
    if (!opinions.emplace(std::make_pair(question, worker),
                          encode_checked(path, line, scale, label))
             .second) {
      parse_fail(path, line, "duplicate true opinion for (" + question + ", " + worker + ")");
    }
  });
  return opinions;
}

void write_true_opinions_file(const fs::path& path,
                              const std::map<std::pair<std::string, std::string>, int>& opinions,
                              const LabelScale& scale) {
  auto out = open_output(path);
  for (const auto& [key, score] : opinions) {
    ordered_json record;
    record["question_id"] = key.first;
    record["worker_id"] = key.second;
    record["true_label"] = scale.decode(score);
    out << record.dump() << '\n';
  }
}

LabelScale parse_scale_file(const fs::path& path) {
  auto in = open_input(path);
  std::vector<std::string> labels;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) parse_fail(path, line, "empty label line");
    labels.push_back(text);
  }
  return LabelScale::from_labels(std::move(labels));
}

void write_scale_file(const fs::path& path, const LabelScale& scale) {
  auto out = open_output(path);
  for (const auto& label : scale.labels()) out << label << '\n';
}

std::map<std::string, double> parse_gammas_file(const fs::path& path) {
  std::map<std::string, double> gammas;
  bool saw_header = false;
  for_each_line(path, [&](int line, const std::string& text) {
    if (!saw_header) {
      if (text != "worker_id,gamma") parse_fail(path, line, "expected header 'worker_id,gamma'");
      saw_header = true;
      return;
    }
    const auto comma = text.rfind(',');
    if (comma == std::string::npos) parse_fail(path, line, "expected 'worker_id,gamma'");
    const std::string worker = text.substr(0, comma);
    double gamma = 0.0;
    try {
      std::size_t used = 0;
      gamma = std::stod(text.substr(comma + 1), &used);
      if (used != text.size() - comma - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      parse_fail(path, line, "invalid gamma value");
    }
    if (gamma < 0.0 || gamma > 1.0) parse_fail(path, line, "gamma outside [0, 1]");
    if (!gammas.emplace(worker, gamma).second) {
      parse_fail(path, line, "duplicate gamma for worker '" + worker + "'");
    }
  });
  if (!saw_header) throw Error(Errc::parse_error, path.string() + ": empty gammas file");
  return gammas;
}

void write_metrics_csv(const fs::path& path, const MetricsReport& report) {
  auto out = open_output(path);
  out << "worker_id,question_id,drop,deviation_ratio,reliability,accuracy,weight\n";
  for (const auto& row : report.per_question) {
    out << csv_escape(row.worker_id) << ',' << csv_escape(row.question_id) << ','
        << format_number(row.drop) << ',' << format_number(row.deviation_ratio) << ','
        << format_number(row.reliability) << ',' << format_number(row.accuracy) << ','
        << format_number(row.weight) << '\n';
  }
}

void write_summary_csv(const fs::path& path, const MetricsReport& report) {
  auto out = open_output(path);
  out << "worker_id,mean_drop,mean_reliability,mean_accuracy,mean_weight\n";
  for (const auto& row : report.summaries) {
    out << csv_escape(row.worker_id) << ',' << format_number(row.mean_drop) << ','
        << format_number(row.mean_reliability) << ',' << format_number(row.mean_accuracy) << ','
        << format_number(row.mean_weight) << '\n';
  }
}

void write_consensus_csv(const fs::path& path, const std::vector<ConsensusResult>& results) {
  auto out = open_output(path);
  out << "question_id,method,aggregate_score,final_label\n";
  for (const auto& result : results) {
    out << csv_escape(result.question_id) << ',' << method_name(result.method) << ','
        << format_number(result.aggregate_score) << ',' << csv_escape(result.final_label)
        << '\n';
  }
}

void write_recovery_csv(const fs::path& path, const std::vector<RecoveryRow>& rows) {
  auto out = open_output(path);
  out << "method,exact_match_rate,mae\n";
  for (const auto& row : rows) {
    out << method_name(row.method) << ',' << format_number(row.exact_match_rate) << ','
        << format_number(row.mae) << '\n';
  }
}

void write_debias_csv(const fs::path& path, const DebiasReport& report) {
  auto out = open_output(path);
  out << "readout,match_rate,opinions\n";
  out << "map," << format_number(report.map_match_rate) << ',' << report.opinions << '\n';
  out << "face-value," << format_number(report.face_value_match_rate) << ',' << report.opinions
      << '\n';
}

void write_posterior_csv(const fs::path& path,
                         const std::vector<QuestionPosterior>& posteriors) {
  auto out = open_output(path);
  out << "question_id,worker_id,score,probability\n";
  for (const auto& question : posteriors) {
    for (std::size_t i = 0; i < question.worker_ids.size(); ++i) {
      for (int score = 1; score <= question.table.k; ++score) {
        out << csv_escape(question.question_id) << ',' << csv_escape(question.worker_ids[i])
            << ',' << score << ','
            << format_number(question.table.marginals[i][static_cast<std::size_t>(score - 1)])
            << '\n';
      }
    }
  }
}

void write_map_csv(const fs::path& path, const std::vector<QuestionPosterior>& posteriors,
                   const LabelScale& scale) {
  auto out = open_output(path);
  out << "question_id,worker_id,map_score,map_label\n";
  for (const auto& question : posteriors) {
    const auto map_scores = map_true_opinions(question.table);
    for (std::size_t i = 0; i < question.worker_ids.size(); ++i) {
      out << csv_escape(question.question_id) << ',' << csv_escape(question.worker_ids[i]) << ','
          << map_scores[i] << ',' << csv_escape(scale.decode(map_scores[i])) << '\n';
    }
  }
}

}  // namespace depjudge
