#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metaelo/metrics.hpp"

namespace metaelo {

using ModelId = std::string;
using RatingMap = std::map<ModelId, double>;
using ScoreMap = std::map<ModelId, double>;

enum class UpdateMode { batch, sequential };

std::string_view to_string(UpdateMode mode) noexcept;
UpdateMode parse_update_mode(std::string_view text);

struct EloConfig {
  double k_factor = 40.0;
  double draw_margin = 0.05;
  double baseline = 1500.0;
  UpdateMode update_mode = UpdateMode::batch;
  // Only consulted in sequential mode, to order the matches.
  std::uint64_t rng_seed = 0;

  void validate() const;

  friend bool operator==(const EloConfig&, const EloConfig&) = default;
};

struct ExpectedScores {
  double a = 0.5;
  double b = 0.5;
};

struct MatchResult {
  ModelId model_a;
  ModelId model_b;
  double f1_a = 0.0;
  double f1_b = 0.0;
  double s_a = 0.5;
  double e_a = 0.5;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

struct CycleResult {
  int cycle_index = 1;
  std::string test_set_id;
  std::map<ModelId, MetricSet> metrics;
  // Audit detail behind `metrics`; may be empty for cycles built in memory.
  std::map<ModelId, ConfusionMatrix> confusion;
  std::map<ModelId, std::uint64_t> missing_predictions;
  UnparsedPolicy unparsed_policy = UnparsedPolicy::count_wrong;
  std::vector<MatchResult> matches;
  RatingMap ratings_before;
  RatingMap ratings_after;
  EloConfig config_snapshot;
};

struct TournamentResult {
  std::vector<MatchResult> matches;
  RatingMap ratings_after;
};

// Logistic expectation on the 400-point scale. Throws NonFiniteRating.
ExpectedScores expected_score(double r_a, double r_b);

/// Margin rule: a win needs an F1 lead strictly greater than `draw_margin`.
///
/// F1 values and the margin are compared as decimals on a 1e-12 grid, so
/// 0.90 vs 0.85 at margin 0.05 is a draw even though the binary doubles differ
/// by slightly more than 0.05.
double match_outcome(double f1_a, double f1_b, double draw_margin);

std::pair<double, double> update_pair(double r_a, double r_b, double s_a, double e_a, double k);

// Pairs every model with every other exactly once, ordered by model id.
std::vector<std::pair<ModelId, ModelId>> round_robin_pairs(const RatingMap& ratings);

/// One cycle of round-robin play.
///
/// batch: expected scores from cycle-start ratings, deltas summed per model and
/// applied once. The sum runs in opponent-id order, so the result does not
/// depend on the order of the match list.
/// sequential: matches shuffled by `rng_seed`, ratings updated after each one.
TournamentResult run_round_robin(const RatingMap& ratings, const ScoreMap& f1s, const EloConfig& config);

// Batch update of `before` from already-scored matches.
RatingMap apply_batch(const RatingMap& before, std::span<const MatchResult> matches, double k);

}  // namespace metaelo
