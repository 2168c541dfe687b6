#pragma once

#include <span>

#include "metaelo/data.hpp"
#include "metaelo/store.hpp"

namespace metaelo {

struct CycleOptions {
  EloConfig elo;
  Averaging averaging = Averaging::macro;
  UnparsedPolicy unparsed = UnparsedPolicy::count_wrong;
  // Allow the gold file to introduce a new fixed test set for this cycle.
  bool replace_test_set = false;
};

struct ModelEvaluation {
  MetricSet metrics;
  ConfusionMatrix confusion;
  std::uint64_t missing = 0;
};

// Binary averaging scores the first label of the gold label set as positive.
ModelEvaluation evaluate_predictions(const LabeledDataset& gold, const PredictionSet& preds, Averaging averaging,
                                     UnparsedPolicy unparsed);

/// Runs one leaderboard cycle end to end and appends it to the archive.
///
/// Ratings and F1 values enter the tournament, and ratings are committed, at
/// the archive's 6-decimal precision, so continuing from a reloaded archive
/// gives the same result as continuing in memory.
LeaderboardArchive run_cycle(LeaderboardArchive archive, const LabeledDataset& gold,
                             std::span<const PredictionSet> predictions, const CycleOptions& options);

}  // namespace metaelo
