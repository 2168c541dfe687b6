#include "metaelo/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "metaelo/error.hpp"
#include "metaelo/rng.hpp"

namespace metaelo {

namespace {

using nlohmann::json;

struct Line {
  std::size_t number;
  std::string_view text;
};

// Non-blank lines with 1-based numbers.
std::vector<Line> split_lines(std::string_view doc) {
  std::vector<Line> out;
  std::size_t number = 0;
  while (!doc.empty()) {
    ++number;
    auto nl = doc.find('\n');
    auto line = doc.substr(0, nl);
    doc = nl == std::string_view::npos ? std::string_view{} : doc.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    out.push_back({number, line});
  }
  return out;
}

json parse_record(const Line& line) {
  json record = json::parse(line.text, nullptr, false);
  if (record.is_discarded() || !record.is_object()) {
    throw Error(Errc::MalformedRecord, "line " + std::to_string(line.number) + " is not a JSON object",
                line.number);
  }
  return record;
}

std::string string_field(const json& record, const char* key, const Line& line) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_string()) {
    throw Error(Errc::MalformedRecord,
                "line " + std::to_string(line.number) + " needs string field '" + key + "'", line.number);
  }
  return it->get<std::string>();
}

LabeledDataset partition_of(const LabeledDataset& dataset, std::string_view suffix,
                            std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  LabeledDataset out;
  out.dataset_id = dataset.dataset_id + "-" + std::string(suffix);
  out.label_set = dataset.label_set;
  out.items.reserve(indices.size());
  for (auto i : indices) out.items.push_back(dataset.items[i]);
  return out;
}

// Largest-remainder apportionment of `count` over parts-per-billion shares.
std::array<std::size_t, 3> apportion(std::size_t count, const std::array<std::uint64_t, 3>& shares,
                                     std::uint64_t scale) {
  std::array<std::size_t, 3> seats{};
  std::array<std::uint64_t, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t p = 0; p < 3; ++p) {
    const std::uint64_t quota = static_cast<std::uint64_t>(count) * shares[p];
    seats[p] = static_cast<std::size_t>(quota / scale);
    remainder[p] = quota % scale;
    assigned += seats[p];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < count; ++k, ++assigned) ++seats[order[k % 3]];
  return seats;
}

}  // namespace

void SplitSpec::validate() const {
  double sum = 0.0;
  for (double p : proportions) {
    if (!std::isfinite(p) || p <= 0.0) {
      throw Error(Errc::DegenerateProportions, "every proportion must be > 0");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(Errc::DegenerateProportions, "proportions sum to " + std::to_string(sum) + ", not 1");
  }
}

LabeledDataset parse_dataset(std::string_view document, std::string_view fallback_id) {
  auto lines = split_lines(document);
  LabeledDataset ds;
  ds.dataset_id = std::string(fallback_id);
  bool header_labels = false;
  std::size_t first = 0;

  if (!lines.empty()) {
    json head = parse_record(lines[0]);
    if (!head.contains("id")) {
      first = 1;
      if (auto it = head.find("dataset_id"); it != head.end()) {
        if (!it->is_string()) throw Error(Errc::MalformedRecord, "dataset_id must be a string", lines[0].number);
        ds.dataset_id = it->get<std::string>();
      }
      if (auto it = head.find("label_set"); it != head.end()) {
        if (!it->is_array()) throw Error(Errc::MalformedRecord, "label_set must be a list", lines[0].number);
        for (const auto& l : *it) {
          if (!l.is_string()) throw Error(Errc::MalformedRecord, "labels must be strings", lines[0].number);
          ds.label_set.push_back(l.get<std::string>());
        }
        header_labels = true;
      }
    }
  }

  std::set<std::string> seen;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto& line = lines[i];
    json record = parse_record(line);
    Item item{string_field(record, "id", line), string_field(record, "text", line),
              string_field(record, "label", line)};
    if (item.item_id.empty()) throw Error(Errc::MalformedRecord, "empty item id", line.number);
    if (!seen.insert(item.item_id).second) {
      throw Error(Errc::DuplicateItemId,
                  "item '" + item.item_id + "' repeated on line " + std::to_string(line.number), line.number);
    }
    if (std::find(ds.label_set.begin(), ds.label_set.end(), item.label) == ds.label_set.end()) {
      if (header_labels) {
        throw Error(Errc::MalformedRecord,
                    "label '" + item.label + "' on line " + std::to_string(line.number) + " not in label_set",
                    line.number);
      }
      ds.label_set.push_back(item.label);
    }
    ds.items.push_back(std::move(item));
  }
  if (ds.items.empty()) throw Error(Errc::EmptyDataset, "dataset has no items");
  return ds;
}

PredictionSet parse_predictions(std::string_view document) {
  auto lines = split_lines(document);
  if (lines.empty()) throw Error(Errc::MalformedRecord, "prediction file is empty", 1);
  json head = parse_record(lines[0]);
  PredictionSet ps;
  ps.model_id = string_field(head, "model_id", lines[0]);
  ps.test_set_id = string_field(head, "test_set_id", lines[0]);

  auto& d = ps.descriptor;
  d.model_id = ps.model_id;
  d.display_name = head.value("display_name", ps.model_id);
  try {
    if (auto it = head.find("params_billions"); it != head.end() && !it->is_null()) {
      d.params_billions = it->get<double>();
    }
    if (head.contains("deployment")) d.deployment = parse_deployment(head["deployment"].get<std::string>());
    if (head.contains("license")) d.license = parse_license(head["license"].get<std::string>());
    if (auto it = head.find("family"); it != head.end() && !it->is_null()) d.family = it->get<std::string>();
    d.validate();
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedRecord, std::string("bad metadata: ") + e.what(), lines[0].number);
  } catch (const Error& e) {
    throw Error(Errc::MalformedRecord, e.detail(), lines[0].number);
  }

  for (std::size_t i = 1; i < lines.size(); ++i) {
    json record = parse_record(lines[i]);
    auto id = string_field(record, "id", lines[i]);
    auto output = string_field(record, "output", lines[i]);
    if (!ps.predictions.emplace(std::move(id), std::move(output)).second) {
      throw Error(Errc::DuplicateItemId, "prediction repeated on line " + std::to_string(lines[i].number),
                  lines[i].number);
    }
  }
  return ps;
}

std::string serialize_dataset(const LabeledDataset& dataset) {
  std::string out = json{{"dataset_id", dataset.dataset_id}, {"label_set", dataset.label_set}}.dump() + "\n";
  for (const auto& item : dataset.items) {
    out += json{{"id", item.item_id}, {"text", item.text}, {"label", item.label}}.dump() + "\n";
  }
  return out;
}

std::string serialize_predictions(const PredictionSet& preds) {
  const auto& d = preds.descriptor;
  json head{{"model_id", preds.model_id},
            {"test_set_id", preds.test_set_id},
            {"display_name", d.display_name.empty() ? preds.model_id : d.display_name},
            {"deployment", to_string(d.deployment)},
            {"license", to_string(d.license)}};
  if (d.params_billions) head["params_billions"] = *d.params_billions;
  if (d.family) head["family"] = *d.family;
  std::string out = head.dump() + "\n";
  for (const auto& [id, output] : preds.predictions) out += json{{"id", id}, {"output", output}}.dump() + "\n";
  return out;
}

JoinedPredictions join_predictions(const LabeledDataset& dataset, const PredictionSet& preds,
                                   std::span<const Label> labels) {
  if (preds.test_set_id != dataset.dataset_id) {
    throw Error(Errc::TestSetMismatch, "predictions of '" + preds.model_id + "' target test set '" +
                                           preds.test_set_id + "', expected '" + dataset.dataset_id + "'");
  }
  JoinedPredictions out;
  out.gold.reserve(dataset.items.size());
  out.pred.reserve(dataset.items.size());
  std::size_t matched = 0;
  for (const auto& item : dataset.items) {
    out.gold.push_back(item.label);
    auto it = preds.predictions.find(item.item_id);
    if (it == preds.predictions.end()) {
      out.pred.emplace_back(std::nullopt);
      ++out.missing;
    } else {
      out.pred.push_back(normalize_label(it->second, labels));
      ++matched;
    }
  }
  if (matched != preds.predictions.size()) {
    throw Error(Errc::TestSetMismatch, "predictions of '" + preds.model_id + "' name items outside test set '" +
                                           dataset.dataset_id + "'");
  }
  return out;
}

DatasetSplit stratified_split(const LabeledDataset& dataset, const SplitSpec& spec) {
  spec.validate();
  constexpr std::uint64_t kScale = 1'000'000'000;
  std::array<std::uint64_t, 3> shares{};
  for (std::size_t p = 0; p < 3; ++p) {
    shares[p] = static_cast<std::uint64_t>(std::llround(spec.proportions[p] * static_cast<double>(kScale)));
    if (shares[p] == 0) throw Error(Errc::DegenerateProportions, "proportion below 1e-9");
  }
  // Absorb rounding drift so the shares sum to the scale exactly.
  const auto total_shares = shares[0] + shares[1] + shares[2];
  auto largest = static_cast<std::size_t>(std::max_element(shares.begin(), shares.end()) - shares.begin());
  shares[largest] = shares[largest] + kScale - total_shares;

  std::vector<std::vector<std::size_t>> groups;
  if (spec.stratified) {
    for (const auto& label : dataset.label_set) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < dataset.items.size(); ++i) {
        if (dataset.items[i].label == label) members.push_back(i);
      }
      if (members.empty()) continue;
      if (members.size() < 3) {
        throw Error(Errc::ClassTooSmall, "class '" + label + "' has " + std::to_string(members.size()) +
                                             " items; stratification needs at least 3");
      }
      groups.push_back(std::move(members));
    }
  } else {
    std::vector<std::size_t> all(dataset.items.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    groups.push_back(std::move(all));
  }

  std::mt19937_64 gen(spec.seed);
  std::array<std::vector<std::size_t>, 3> parts;
  for (auto& group : groups) {
    seeded_shuffle(std::span(group), gen);
    auto seats = apportion(group.size(), shares, kScale);
    auto it = group.begin();
    for (std::size_t p = 0; p < 3; ++p) {
      parts[p].insert(parts[p].end(), it, it + static_cast<std::ptrdiff_t>(seats[p]));
      it += static_cast<std::ptrdiff_t>(seats[p]);
    }
  }
  return {partition_of(dataset, "train", std::move(parts[0])),
          partition_of(dataset, "validation", std::move(parts[1])),
          partition_of(dataset, "test", std::move(parts[2]))};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(Errc::Io, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::Io, "cannot rename onto '" + path.string() + "': " + ec.message());
}

}  // namespace metaelo
