#pragma once

#include <map>
#include <string>
#include <vector>

#include "depjudge/errors.hpp"

namespace depjudge {

/// Ordered set of k >= 2 distinct label names. The label at position j
/// (0-based) carries score j + 1, so scores run 1..k in list order and a
/// larger score always reads as the more positive opinion.
class LabelScale {
 public:
  /// Empty placeholder scale; only assignment makes it usable.
  LabelScale() = default;

  static LabelScale from_labels(std::vector<std::string> labels);

  /// Generic numeric scale with labels "1".."k".
  static LabelScale numeric(int k);

  /// The seven review verdicts, worst first: strong reject .. strong accept.
  static LabelScale review7();

  int k() const { return static_cast<int>(labels_.size()); }
  int encode(const std::string& label) const;
  const std::string& decode(int score) const;
  bool contains(const std::string& label) const;
  const std::vector<std::string>& labels() const { return labels_; }

  friend bool operator==(const LabelScale&, const LabelScale&) = default;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, int> score_by_label_;
};

}  // namespace depjudge
