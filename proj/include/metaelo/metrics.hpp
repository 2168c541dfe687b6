#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace metaelo {

using Label = std::string;

// A prediction after label normalization; nullopt means "unparsed".
using ParsedLabel = std::optional<Label>;

enum class Averaging { binary_positive, macro, weighted };

// What to do with predictions that match no label.
enum class UnparsedPolicy { count_wrong, drop };

std::string_view to_string(Averaging averaging) noexcept;
std::string_view to_string(UnparsedPolicy policy) noexcept;
// Accepts the CLI spellings ("binary", "macro", "weighted") and the long names.
Averaging parse_averaging(std::string_view text);
UnparsedPolicy parse_unparsed_policy(std::string_view text);

struct ConfusionMatrix {
  std::vector<Label> labels;
  // counts[t][p]: items with true label t predicted as p.
  std::vector<std::vector<std::uint64_t>> counts;
  std::uint64_t unparsed = 0;
  // Unparsed predictions broken down by gold label; sums to `unparsed`.
  std::vector<std::uint64_t> unparsed_by_gold;

  std::uint64_t total() const noexcept;
  std::uint64_t correct() const noexcept;
  std::optional<std::size_t> index_of(std::string_view label) const noexcept;
};

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;

  friend bool operator==(const ClassScores&, const ClassScores&) = default;
};

struct MetricSet {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Averaging averaging = Averaging::macro;
  std::map<Label, ClassScores> per_class;

  friend bool operator==(const MetricSet&, const MetricSet&) = default;
};

/// Tallies gold labels against normalized predictions.
///
/// Unparsed predictions land in no cell of `counts`. Under count_wrong they are
/// tallied in `unparsed` and score as a miss for their gold class; under drop
/// the item is skipped entirely.
ConfusionMatrix confusion_matrix(std::span<const Label> gold, std::span<const ParsedLabel> pred,
                                 std::span<const Label> labels,
                                 UnparsedPolicy policy = UnparsedPolicy::count_wrong);

/// Accuracy, precision, recall and F1 under the requested averaging.
///
/// 0/0 cells resolve to 0. binary_positive reports the scores of
/// `positive_label`, which defaults to the first label.
MetricSet classification_metrics(const ConfusionMatrix& cm, Averaging averaging,
                                 std::optional<std::string_view> positive_label = std::nullopt);

// Trims whitespace and surrounding punctuation, then matches case-insensitively.
ParsedLabel normalize_label(std::string_view raw, std::span<const Label> labels);

}  // namespace metaelo
