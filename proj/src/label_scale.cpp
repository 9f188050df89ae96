#include "depjudge/label_scale.hpp"

namespace depjudge {

LabelScale LabelScale::from_labels(std::vector<std::string> labels) {
  if (labels.size() < 2) {
    throw Error(Errc::scale_too_small,
                "a scale needs at least 2 labels, got " + std::to_string(labels.size()));
  }
  LabelScale scale;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = scale.score_by_label_.emplace(labels[i], static_cast<int>(i) + 1);
    if (!inserted) {
      throw Error(Errc::duplicate_label, "label '" + labels[i] + "' appears more than once");
    }
  }
  scale.labels_ = std::move(labels);
  return scale;
}

LabelScale LabelScale::numeric(int k) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(k > 0 ? k : 0));
  for (int i = 1; i <= k; ++i) labels.push_back(std::to_string(i));
  return from_labels(std::move(labels));
}

LabelScale LabelScale::review7() {
  return from_labels({"strong reject", "reject", "weak reject", "borderline", "weak accept",
                      "accept", "strong accept"});
}

int LabelScale::encode(const std::string& label) const {
  auto it = score_by_label_.find(label);
  if (it == score_by_label_.end()) {
    throw Error(Errc::unknown_label, "label '" + label + "' is not on the scale");
  }
  return it->second;
}

const std::string& LabelScale::decode(int score) const {
  if (score < 1 || score > k()) {
    throw Error(Errc::score_out_of_range,
                "score " + std::to_string(score) + " outside 1.." + std::to_string(k()));
  }
  return labels_[static_cast<std::size_t>(score - 1)];
}

bool LabelScale::contains(const std::string& label) const {
  return score_by_label_.count(label) != 0;
}

}  // namespace depjudge
