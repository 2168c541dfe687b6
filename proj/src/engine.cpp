#include "metaelo/engine.hpp"

#include <set>

#include "metaelo/canonical_json.hpp"
#include "metaelo/error.hpp"

namespace metaelo {

ModelEvaluation evaluate_predictions(const LabeledDataset& gold, const PredictionSet& preds, Averaging averaging,
                                     UnparsedPolicy unparsed) {
  auto joined = join_predictions(gold, preds, gold.label_set);
  ModelEvaluation out;
  out.missing = joined.missing;
  out.confusion = confusion_matrix(joined.gold, joined.pred, gold.label_set, unparsed);
  out.metrics = classification_metrics(out.confusion, averaging, gold.label_set.front());
  return out;
}

LeaderboardArchive run_cycle(LeaderboardArchive archive, const LabeledDataset& gold,
                             std::span<const PredictionSet> predictions, const CycleOptions& options) {
  options.elo.validate();
  if (predictions.size() < 2) {
    throw Error(Errc::FewerThanTwoModels, "a cycle needs prediction files from at least two models");
  }
  if (!archive.test_set_id.empty() && archive.test_set_id != gold.dataset_id && !options.replace_test_set) {
    throw Error(Errc::TestSetMismatch, "archive is fixed to test set '" + archive.test_set_id + "', gold file is '" +
                                           gold.dataset_id + "'");
  }

  ModelRegistry registry;
  for (const auto& [id, record] : archive.catalog) registry.register_model(record);

  std::set<ModelId> participants;
  std::map<ModelId, ModelEvaluation> evaluations;
  for (const auto& preds : predictions) {
    if (!participants.insert(preds.model_id).second) {
      throw Error(Errc::DuplicateModelId, "two prediction files for model '" + preds.model_id + "'");
    }
    if (!registry.contains(preds.model_id)) registry.register_model(preds.descriptor);
    evaluations.emplace(preds.model_id, evaluate_predictions(gold, preds, options.averaging, options.unparsed));
  }

  auto state = apply_lifecycle(archive.state, registry, participants, options.elo.baseline);

  RatingMap before;
  ScoreMap f1s;
  for (const auto& [id, elo] : active_ratings(state)) {
    before[id] = quantize6(elo);
    f1s[id] = quantize6(evaluations.at(id).metrics.f1);
  }
  auto tournament = run_round_robin(before, f1s, options.elo);

  CycleResult cycle;
  cycle.cycle_index = archive.state.cycle_count + 1;
  cycle.test_set_id = gold.dataset_id;
  cycle.config_snapshot = options.elo;
  cycle.unparsed_policy = options.unparsed;
  for (auto& [id, eval] : evaluations) {
    cycle.metrics[id] = eval.metrics;
    cycle.confusion[id] = eval.confusion;
    cycle.missing_predictions[id] = eval.missing;
  }
  cycle.matches = std::move(tournament.matches);
  cycle.ratings_before = std::move(before);
  // Commit ratings at archive precision so a re-entering model resumes from
  // exactly the value on disk.
  for (const auto& [id, elo] : tournament.ratings_after) cycle.ratings_after[id] = quantize6(elo);

  for (const auto& [id, record] : registry.models()) archive.catalog[id] = record;
  return append_cycle(std::move(archive), cycle);
}

}  // namespace metaelo
