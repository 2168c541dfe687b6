#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "metaelo/metrics.hpp"
#include "metaelo/registry.hpp"

namespace metaelo {

struct Item {
  std::string item_id;
  std::string text;
  Label label;

  friend bool operator==(const Item&, const Item&) = default;
};

struct LabeledDataset {
  std::string dataset_id;
  std::vector<Item> items;
  std::vector<Label> label_set;

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

struct PredictionSet {
  ModelId model_id;
  std::string test_set_id;
  std::map<std::string, std::string> predictions;
  // Catalog entry built from the file metadata (model_id always set).
  ModelRecord descriptor;
};

struct SplitSpec {
  std::array<double, 3> proportions{0.70, 0.15, 0.15};
  std::uint64_t seed = 0;
  bool stratified = true;

  void validate() const;
};

struct DatasetSplit {
  LabeledDataset train;
  LabeledDataset validation;
  LabeledDataset test;
};

struct JoinedPredictions {
  std::vector<Label> gold;
  std::vector<ParsedLabel> pred;
  std::uint64_t missing = 0;
};

/// Parses a JSON Lines dataset.
///
/// Records are {"id", "text", "label"}. An optional first record without an
/// "id" carries {"dataset_id", "label_set"}; otherwise the id is
/// `fallback_id` and labels are collected in order of first appearance.
LabeledDataset parse_dataset(std::string_view document, std::string_view fallback_id = "dataset");

// First record is metadata: model_id, test_set_id and optional catalog fields.
PredictionSet parse_predictions(std::string_view document);

std::string serialize_dataset(const LabeledDataset& dataset);
std::string serialize_predictions(const PredictionSet& preds);

// Aligns predictions to gold items in dataset order; gaps become unparsed.
JoinedPredictions join_predictions(const LabeledDataset& dataset, const PredictionSet& preds,
                                   std::span<const Label> labels);

/// Seeded train/validation/test split.
///
/// Each class is shuffled on its own and apportioned by largest remainder of
/// class_count x proportion, ties going to train, then validation, then test.
/// Partitions keep the dataset's original item order.
DatasetSplit stratified_split(const LabeledDataset& dataset, const SplitSpec& spec);

std::string read_text_file(const std::filesystem::path& path);
// Writes via a sibling temporary file and rename.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace metaelo
