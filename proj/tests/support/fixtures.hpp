#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "metaelo/data.hpp"

namespace testsupport {

// TOXIC/NONTOXIC test set with `per_class` items of each label.
inline metaelo::LabeledDataset balanced_test_set(const std::string& id, std::size_t per_class = 100) {
  metaelo::LabeledDataset ds;
  ds.dataset_id = id;
  ds.label_set = {"TOXIC", "NONTOXIC"};
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    ds.items.push_back({"item-" + std::to_string(i), "comment " + std::to_string(i),
                        i % 2 == 0 ? "TOXIC" : "NONTOXIC"});
  }
  return ds;
}

/// Predictions that flip `errors_per_class` items of each class.
///
/// On a balanced set of n items per class, every class then has
/// P = R = 1 - e/n, so macro F1 is exactly 1 - e/n.
inline metaelo::PredictionSet predictions_with_errors(const metaelo::LabeledDataset& ds, const std::string& model,
                                                      std::size_t errors_per_class, std::size_t unparsed = 0) {
  metaelo::PredictionSet ps;
  ps.model_id = model;
  ps.test_set_id = ds.dataset_id;
  ps.descriptor.model_id = model;
  ps.descriptor.display_name = model;
  std::map<std::string, std::size_t> flipped;
  std::size_t garbled = 0;
  for (const auto& item : ds.items) {
    std::string out = item.label;
    if (flipped[item.label] < errors_per_class) {
      ++flipped[item.label];
      if (garbled < unparsed) {
        ++garbled;
        out = "I cannot classify this.";
      } else {
        out = item.label == "TOXIC" ? "nontoxic" : " Toxic.";
      }
    }
    ps.predictions[item.item_id] = out;
  }
  return ps;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  metaelo::write_text_file_atomic(path, text);
}

}  // namespace testsupport
