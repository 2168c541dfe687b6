#include "metaelo/store.hpp"

#include <cmath>
#include <set>

#include "metaelo/canonical_json.hpp"
#include "metaelo/data.hpp"
#include "metaelo/error.hpp"

namespace metaelo {

namespace {

using nlohmann::json;

bool close(double a, double b) { return std::abs(a - b) <= kReplayTolerance; }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

const json& req(const json& j, const char* key) {
  if (!j.is_object()) throw Error(Errc::CorruptArchive, std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw Error(Errc::CorruptArchive, std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T get(const json& j, const char* key) {
  try {
    return req(j, key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptArchive, std::string("field '") + key + "': " + e.what());
  }
}

template <typename Fn>
auto convert(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptArchive, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::CorruptArchive) throw;
    throw Error(Errc::CorruptArchive, e.what());
  }
}

json rating_map_to_json(const RatingMap& m) {
  json j = json::object();
  for (const auto& [id, r] : m) j[id] = r;
  return j;
}

RatingMap rating_map_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::CorruptArchive, "rating map must be an object");
  RatingMap m;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number()) throw Error(Errc::CorruptArchive, "rating of '" + it.key() + "' is not a number");
    m[it.key()] = it.value().get<double>();
  }
  return m;
}

json config_to_json(const EloConfig& c) {
  return json{{"k_factor", c.k_factor},
              {"draw_margin", c.draw_margin},
              {"baseline", c.baseline},
              {"update_mode", to_string(c.update_mode)},
              {"rng_seed", c.rng_seed}};
}

EloConfig config_from_json(const json& j) {
  EloConfig c;
  c.k_factor = get<double>(j, "k_factor");
  c.draw_margin = get<double>(j, "draw_margin");
  c.baseline = get<double>(j, "baseline");
  c.update_mode = convert([&] { return parse_update_mode(get<std::string>(j, "update_mode")); });
  c.rng_seed = get<std::uint64_t>(j, "rng_seed");
  return c;
}

json confusion_to_json(const ConfusionMatrix& cm) {
  return json{{"labels", cm.labels},
              {"counts", cm.counts},
              {"unparsed", cm.unparsed},
              {"unparsed_by_gold", cm.unparsed_by_gold}};
}

ConfusionMatrix confusion_from_json(const json& j) {
  ConfusionMatrix cm;
  cm.labels = get<std::vector<Label>>(j, "labels");
  cm.counts = get<std::vector<std::vector<std::uint64_t>>>(j, "counts");
  cm.unparsed = get<std::uint64_t>(j, "unparsed");
  cm.unparsed_by_gold = get<std::vector<std::uint64_t>>(j, "unparsed_by_gold");
  if (cm.counts.size() != cm.labels.size() || cm.unparsed_by_gold.size() != cm.labels.size()) {
    throw Error(Errc::CorruptArchive, "confusion matrix dimensions disagree with its labels");
  }
  for (const auto& row : cm.counts) {
    if (row.size() != cm.labels.size()) throw Error(Errc::CorruptArchive, "confusion matrix is not square");
  }
  return cm;
}

json match_to_json(const MatchResult& m) {
  return json{{"model_a", m.model_a}, {"model_b", m.model_b}, {"f1_a", m.f1_a},
              {"f1_b", m.f1_b},       {"s_a", m.s_a},         {"e_a", m.e_a}};
}

MatchResult match_from_json(const json& j) {
  return MatchResult{get<std::string>(j, "model_a"), get<std::string>(j, "model_b"), get<double>(j, "f1_a"),
                     get<double>(j, "f1_b"),         get<double>(j, "s_a"),          get<double>(j, "e_a")};
}

const std::set<std::string> kCycleKeys{"config",     "confusion",      "cycle_index",   "matches",
                                       "metrics",    "missing_predictions", "ratings_after", "ratings_before",
                                       "test_set_id", "unparsed_policy"};
const std::set<std::string> kTopKeys{"cycles", "format_version", "leaderboard", "models", "ratings", "test_set_id"};

json cycle_to_json(const CycleResult& c, const json& extra) {
  json j = extra.is_object() ? extra : json::object();
  j["cycle_index"] = c.cycle_index;
  j["test_set_id"] = c.test_set_id;
  j["config"] = config_to_json(c.config_snapshot);
  j["unparsed_policy"] = to_string(c.unparsed_policy);
  json metrics = json::object();
  for (const auto& [id, m] : c.metrics) metrics[id] = metric_set_to_json(m);
  j["metrics"] = std::move(metrics);
  json confusion = json::object();
  for (const auto& [id, cm] : c.confusion) confusion[id] = confusion_to_json(cm);
  j["confusion"] = std::move(confusion);
  json missing = json::object();
  for (const auto& [id, n] : c.missing_predictions) missing[id] = n;
  j["missing_predictions"] = std::move(missing);
  json matches = json::array();
  for (const auto& m : c.matches) matches.push_back(match_to_json(m));
  j["matches"] = std::move(matches);
  j["ratings_before"] = rating_map_to_json(c.ratings_before);
  j["ratings_after"] = rating_map_to_json(c.ratings_after);
  return j;
}

CycleResult cycle_from_json(const json& j, json& extra) {
  CycleResult c;
  c.cycle_index = get<int>(j, "cycle_index");
  c.test_set_id = get<std::string>(j, "test_set_id");
  c.config_snapshot = config_from_json(req(j, "config"));
  c.unparsed_policy = convert([&] { return parse_unparsed_policy(get<std::string>(j, "unparsed_policy")); });
  const auto& metrics = req(j, "metrics");
  if (!metrics.is_object()) throw Error(Errc::CorruptArchive, "metrics must be an object");
  for (auto it = metrics.begin(); it != metrics.end(); ++it) c.metrics[it.key()] = metric_set_from_json(it.value());
  const auto& confusion = req(j, "confusion");
  if (!confusion.is_object()) throw Error(Errc::CorruptArchive, "confusion must be an object");
  for (auto it = confusion.begin(); it != confusion.end(); ++it) {
    c.confusion[it.key()] = confusion_from_json(it.value());
  }
  c.missing_predictions = get<std::map<ModelId, std::uint64_t>>(j, "missing_predictions");
  const auto& matches = req(j, "matches");
  if (!matches.is_array()) throw Error(Errc::CorruptArchive, "matches must be a list");
  for (const auto& m : matches) c.matches.push_back(match_from_json(m));
  c.ratings_before = rating_map_from_json(req(j, "ratings_before"));
  c.ratings_after = rating_map_from_json(req(j, "ratings_after"));

  extra = json::object();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!kCycleKeys.contains(it.key())) extra[it.key()] = it.value();
  }
  return c;
}

json model_to_json(const ModelRecord& m) {
  json j{{"display_name", m.display_name},
         {"deployment", to_string(m.deployment)},
         {"license", to_string(m.license)},
         {"active", m.active}};
  if (m.params_billions) j["params_billions"] = *m.params_billions;
  if (m.family) j["family"] = *m.family;
  return j;
}

ModelRecord model_from_json(const std::string& id, const json& j) {
  return convert([&] {
    ModelRecord m;
    m.model_id = id;
    m.display_name = get<std::string>(j, "display_name");
    m.deployment = parse_deployment(get<std::string>(j, "deployment"));
    m.license = parse_license(get<std::string>(j, "license"));
    m.active = get<bool>(j, "active");
    if (j.contains("params_billions")) m.params_billions = get<double>(j, "params_billions");
    if (j.contains("family")) m.family = get<std::string>(j, "family");
    m.validate();
    return m;
  });
}

// Structural checks shared by append and replay.
void check_cycle_shape(const CycleResult& cycle) {
  const auto& before = cycle.ratings_before;
  const std::size_t n = before.size();
  if (n < 2) throw Error(Errc::CorruptArchive, "cycle " + std::to_string(cycle.cycle_index) + " has < 2 models");
  if (cycle.matches.size() != n * (n - 1) / 2) {
    throw Error(Errc::CorruptArchive, "cycle " + std::to_string(cycle.cycle_index) + " has " +
                                          std::to_string(cycle.matches.size()) + " matches for " +
                                          std::to_string(n) + " models");
  }
  std::set<std::pair<ModelId, ModelId>> seen;
  for (const auto& m : cycle.matches) {
    if (!before.contains(m.model_a) || !before.contains(m.model_b) || m.model_a == m.model_b) {
      throw Error(Errc::CorruptArchive, "match between unknown models in cycle " + std::to_string(cycle.cycle_index));
    }
    auto key = std::minmax(m.model_a, m.model_b);
    if (!seen.emplace(key.first, key.second).second) {
      throw Error(Errc::CorruptArchive, "pair played twice in cycle " + std::to_string(cycle.cycle_index));
    }
  }
  for (const auto& [id, r] : before) {
    if (!cycle.ratings_after.contains(id) || !cycle.metrics.contains(id)) {
      throw Error(Errc::CorruptArchive, "model '" + id + "' incomplete in cycle " + std::to_string(cycle.cycle_index));
    }
  }
  if (cycle.ratings_after.size() != n) {
    throw Error(Errc::CorruptArchive, "ratings_after lists non-participants in cycle " +
                                          std::to_string(cycle.cycle_index));
  }
}

}  // namespace

json metric_set_to_json(const MetricSet& m) {
  json per_class = json::object();
  for (const auto& [label, s] : m.per_class) {
    per_class[label] = json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
  }
  return json{{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall},
              {"f1", m.f1},             {"averaging", to_string(m.averaging)}, {"per_class", per_class}};
}

MetricSet metric_set_from_json(const json& j) {
  MetricSet m;
  m.accuracy = get<double>(j, "accuracy");
  m.precision = get<double>(j, "precision");
  m.recall = get<double>(j, "recall");
  m.f1 = get<double>(j, "f1");
  m.averaging = convert([&] { return parse_averaging(get<std::string>(j, "averaging")); });
  const auto& per_class = req(j, "per_class");
  if (!per_class.is_object()) throw Error(Errc::CorruptArchive, "per_class must be an object");
  for (auto it = per_class.begin(); it != per_class.end(); ++it) {
    const auto& s = it.value();
    m.per_class[it.key()] = ClassScores{get<double>(s, "precision"), get<double>(s, "recall"), get<double>(s, "f1"),
                                        get<std::uint64_t>(s, "support")};
  }
  return m;
}

LeaderboardArchive new_archive(LeaderboardSpec spec) {
  spec.validate();
  LeaderboardArchive archive;
  archive.state.spec = std::move(spec);
  return archive;
}

LeaderboardArchive append_cycle(LeaderboardArchive archive, const CycleResult& cycle) {
  auto& state = archive.state;
  if (cycle.cycle_index != state.cycle_count + 1) {
    throw Error(Errc::NonContiguousCycle, "archive is at cycle " + std::to_string(state.cycle_count) +
                                              ", got cycle " + std::to_string(cycle.cycle_index));
  }
  check_cycle_shape(cycle);
  for (const auto& [id, before] : cycle.ratings_before) {
    auto it = state.ratings.find(id);
    const double expected = it == state.ratings.end() ? cycle.config_snapshot.baseline : it->second.elo;
    if (!close(before, expected)) {
      throw Error(Errc::RatingsMismatch,
                  "cycle starts '" + id + "' at " + fmt(before) + " but the archive holds " + fmt(expected));
    }
  }

  for (auto& [id, rating] : state.ratings) rating.status = RatingStatus::inactive;
  for (const auto& [id, after] : cycle.ratings_after) {
    state.ratings[id] = Rating{id, after, cycle.cycle_index, RatingStatus::active};
  }
  for (auto& [id, record] : archive.catalog) {
    auto it = state.ratings.find(id);
    record.active = it != state.ratings.end() && it->second.status == RatingStatus::active;
  }
  state.history.push_back(cycle);
  state.cycle_count = static_cast<int>(state.history.size());
  archive.cycle_extra.resize(state.history.size(), json::object());
  archive.test_set_id = cycle.test_set_id;
  return archive;
}

ReplayVerdict replay_verify(const LeaderboardArchive& archive) {
  const auto& state = archive.state;
  if (state.cycle_count != static_cast<int>(state.history.size())) {
    throw Error(Errc::CorruptArchive, "cycle_count disagrees with the stored history");
  }
  auto diverged = [](int cycle, std::string detail) { return ReplayVerdict{false, cycle, std::move(detail)}; };

  std::map<ModelId, Rating> replayed;
  for (std::size_t i = 0; i < state.history.size(); ++i) {
    const auto& cycle = state.history[i];
    const int index = static_cast<int>(i) + 1;
    if (cycle.cycle_index != index) {
      throw Error(Errc::CorruptArchive, "cycle " + std::to_string(index) + " is numbered " +
                                            std::to_string(cycle.cycle_index));
    }
    check_cycle_shape(cycle);
    const auto& config = cycle.config_snapshot;
    try {
      config.validate();
    } catch (const Error& e) {
      throw Error(Errc::CorruptArchive, e.what());
    }

    for (const auto& [id, before] : cycle.ratings_before) {
      auto it = replayed.find(id);
      const double expected = it == replayed.end() ? config.baseline : it->second.elo;
      if (!close(before, expected)) {
        return diverged(index, "'" + id + "' starts at " + fmt(before) + ", replay gives " + fmt(expected));
      }
    }

    RatingMap current = cycle.ratings_before;
    std::vector<MatchResult> rescored;
    for (const auto& m : cycle.matches) {
      if (!close(m.f1_a, cycle.metrics.at(m.model_a).f1) || !close(m.f1_b, cycle.metrics.at(m.model_b).f1)) {
        return diverged(index, "match " + m.model_a + " vs " + m.model_b + " uses F1 values not in the metrics");
      }
      MatchResult r = m;
      r.s_a = match_outcome(m.f1_a, m.f1_b, config.draw_margin);
      if (r.s_a != m.s_a) {
        return diverged(index, "outcome of " + m.model_a + " vs " + m.model_b + " recorded as " + fmt(m.s_a) +
                                   ", margin rule gives " + fmt(r.s_a));
      }
      const auto& source = config.update_mode == UpdateMode::batch ? cycle.ratings_before : current;
      r.e_a = expected_score(source.at(m.model_a), source.at(m.model_b)).a;
      if (!close(r.e_a, m.e_a)) {
        return diverged(index, "expected score of " + m.model_a + " vs " + m.model_b + " recorded as " +
                                   fmt(m.e_a) + ", replay gives " + fmt(r.e_a));
      }
      if (config.update_mode == UpdateMode::sequential) {
        auto [ra, rb] = update_pair(current.at(m.model_a), current.at(m.model_b), r.s_a, r.e_a, config.k_factor);
        current[m.model_a] = ra;
        current[m.model_b] = rb;
      }
      rescored.push_back(std::move(r));
    }
    if (config.update_mode == UpdateMode::batch) current = apply_batch(cycle.ratings_before, rescored, config.k_factor);

    for (const auto& [id, after] : current) {
      const double stored = cycle.ratings_after.at(id);
      if (!close(after, stored)) {
        return diverged(index, "'" + id + "' ends at " + fmt(stored) + ", replay gives " + fmt(after));
      }
    }

    for (auto& [id, r] : replayed) r.status = RatingStatus::inactive;
    for (const auto& [id, after] : cycle.ratings_after) {
      replayed[id] = Rating{id, after, index, RatingStatus::active};
    }
  }

  if (replayed.size() != state.ratings.size()) {
    return diverged(0, "ratings map lists " + std::to_string(state.ratings.size()) + " models, replay gives " +
                           std::to_string(replayed.size()));
  }
  for (const auto& [id, r] : replayed) {
    auto it = state.ratings.find(id);
    if (it == state.ratings.end()) return diverged(0, "'" + id + "' missing from the ratings map");
    const auto& stored = it->second;
    if (!close(stored.elo, r.elo) || stored.status != r.status || stored.last_active_cycle != r.last_active_cycle) {
      return diverged(0, "current rating of '" + id + "' (" + fmt(stored.elo) + ", " +
                             std::string(to_string(stored.status)) + ") disagrees with replay (" + fmt(r.elo) +
                             ", " + std::string(to_string(r.status)) + ")");
    }
  }
  const auto n = state.history.size();
  return {true, std::nullopt, "verified " + std::to_string(n) + (n == 1 ? " cycle" : " cycles")};
}

std::string serialize_archive(const LeaderboardArchive& archive) {
  const auto& state = archive.state;
  json doc = archive.extra.is_object() ? archive.extra : json::object();
  doc["format_version"] = archive.format_version;
  doc["test_set_id"] = archive.test_set_id;
  const auto& spec = state.spec;
  doc["leaderboard"] = json{{"leaderboard_id", spec.leaderboard_id},
                            {"task_name", spec.task_name},
                            {"language_code", spec.language_code},
                            {"num_categories", spec.num_categories},
                            {"language_weight", spec.language_weight}};
  json models = json::object();
  for (const auto& [id, m] : archive.catalog) models[id] = model_to_json(m);
  doc["models"] = std::move(models);
  json ratings = json::object();
  for (const auto& [id, r] : state.ratings) {
    ratings[id] = json{{"elo", r.elo},
                       {"status", to_string(r.status)},
                       {"last_active_cycle", r.last_active_cycle ? json(*r.last_active_cycle) : json(nullptr)}};
  }
  doc["ratings"] = std::move(ratings);
  json cycles = json::array();
  for (std::size_t i = 0; i < state.history.size(); ++i) {
    cycles.push_back(cycle_to_json(state.history[i], i < archive.cycle_extra.size() ? archive.cycle_extra[i] : json{}));
  }
  doc["cycles"] = std::move(cycles);
  return canonical_dump(doc);
}

LeaderboardArchive parse_archive(std::string_view document) {
  json doc = json::parse(document, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw Error(Errc::CorruptArchive, "archive is not a JSON object");

  LeaderboardArchive archive;
  archive.format_version = get<int>(doc, "format_version");
  if (archive.format_version > kArchiveFormatVersion || archive.format_version < 1) {
    throw Error(Errc::CorruptArchive, "unsupported format_version " + std::to_string(archive.format_version));
  }
  archive.test_set_id = get<std::string>(doc, "test_set_id");

  const auto& lb = req(doc, "leaderboard");
  auto& spec = archive.state.spec;
  spec.leaderboard_id = get<std::string>(lb, "leaderboard_id");
  spec.task_name = get<std::string>(lb, "task_name");
  spec.language_code = get<std::string>(lb, "language_code");
  spec.num_categories = get<int>(lb, "num_categories");
  spec.language_weight = get<double>(lb, "language_weight");
  convert([&] {
    spec.validate();
    return 0;
  });

  const auto& models = req(doc, "models");
  if (!models.is_object()) throw Error(Errc::CorruptArchive, "models must be an object");
  for (auto it = models.begin(); it != models.end(); ++it) {
    archive.catalog[it.key()] = model_from_json(it.key(), it.value());
  }

  const auto& ratings = req(doc, "ratings");
  if (!ratings.is_object()) throw Error(Errc::CorruptArchive, "ratings must be an object");
  for (auto it = ratings.begin(); it != ratings.end(); ++it) {
    Rating r;
    r.model_id = it.key();
    r.elo = get<double>(it.value(), "elo");
    r.status = convert([&] { return parse_rating_status(get<std::string>(it.value(), "status")); });
    const auto& last = req(it.value(), "last_active_cycle");
    if (!last.is_null()) r.last_active_cycle = get<int>(it.value(), "last_active_cycle");
    if (!std::isfinite(r.elo)) throw Error(Errc::CorruptArchive, "non-finite elo for '" + r.model_id + "'");
    archive.state.ratings[r.model_id] = r;
  }

  const auto& cycles = req(doc, "cycles");
  if (!cycles.is_array()) throw Error(Errc::CorruptArchive, "cycles must be a list");
  for (const auto& c : cycles) {
    json extra;
    archive.state.history.push_back(cycle_from_json(c, extra));
    archive.cycle_extra.push_back(std::move(extra));
  }
  archive.state.cycle_count = static_cast<int>(archive.state.history.size());

  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!kTopKeys.contains(it.key())) archive.extra[it.key()] = it.value();
  }
  return archive;
}

LeaderboardArchive load_archive(const std::filesystem::path& path) { return parse_archive(read_text_file(path)); }

void save_archive(const std::filesystem::path& path, const LeaderboardArchive& archive) {
  write_text_file_atomic(path, serialize_archive(archive));
}

}  // namespace metaelo
