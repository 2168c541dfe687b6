// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "metaelo/cli.hpp"
#include "metaelo/elo.hpp"
#include "metaelo/engine.hpp"
#include "metaelo/meta.hpp"
#include "metaelo/metrics.hpp"
#include "metaelo/report.hpp"
#include "metaelo/rng.hpp"
#include "metaelo/store.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace metaelo;
using Clock = std::chrono::steady_clock;

namespace {

class Criterion {
 public:
  Criterion(std::string id, std::string title) : id_(std::move(id)), title_(std::move(title)) {}

  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 8) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void note(const std::string& text) { notes_.push_back(text); }
  bool passed() const { return failed_ == 0; }

  void print(std::ostream& os) const {
    os << (passed() ? "[PASS] " : "[FAIL] ") << id_ << " " << title_ << " (" << checks_ << " checks";
    if (failed_) os << ", " << failed_ << " failed";
    os << ")\n";
    for (const auto& n : notes_) os << "       " << n << "\n";
    for (const auto& f : failures_) os << "       failed: " << f << "\n";
  }

 private:
  std::string id_, title_;
  std::size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_, notes_;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

RatingMap random_ratings(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> r(1000.0, 2000.0);
  RatingMap out;
  for (std::size_t i = 0; i < n; ++i) out["m" + std::to_string(i)] = r(gen);
  return out;
}

ScoreMap random_f1s(std::mt19937_64& gen, const RatingMap& ratings) {
  std::uniform_real_distribution<double> f(0.0, 1.0);
  ScoreMap out;
  // Mix continuous values with a coarse grid so exact draws occur too.
  for (const auto& [id, r] : ratings) out[id] = gen() % 2 ? f(gen) : static_cast<double>(gen() % 21) / 20.0;
  return out;
}

double sum(const RatingMap& m) {
  double s = 0;
  for (const auto& [id, r] : m) s += r;
  return s;
}

Criterion ac1() {
  Criterion c("AC1", "expected-score oracle");
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> r(1000.0, 2000.0);
  double worst = 0.0, worst_sym = 0.0;
  auto t0 = Clock::now();
  for (int i = 0; i < 1000; ++i) {
    const double a = r(gen), b = r(gen);
    const auto e = expected_score(a, b);
    const double err = static_cast<double>(std::fabs(static_cast<long double>(e.a) - testsupport::oracle_expected(a, b)));
    const double sym = std::fabs(e.a + e.b - 1.0);
    worst = std::max(worst, err);
    worst_sym = std::max(worst_sym, sym);
    c.expect(err <= 1e-12, "pair " + std::to_string(i) + " error " + fmt("%.3g", err));
    c.expect(sym <= 1e-15, "pair " + std::to_string(i) + " symmetry " + fmt("%.3g", sym));
  }
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 1.0, "runtime " + fmt("%.3f s", elapsed));
  c.note("max |e - oracle| = " + fmt("%.3g", worst) + ", max |e_a + e_b - 1| = " + fmt("%.3g", worst_sym) +
         ", " + fmt("%.4f s", elapsed));
  return c;
}

Criterion ac2() {
  Criterion c("AC2", "rating conservation");
  std::mt19937_64 gen(202);
  double worst = 0.0;
  auto t0 = Clock::now();
  for (int i = 0; i < 500; ++i) {
    const auto n = 3 + gen() % 18;
    auto ratings = random_ratings(gen, n);
    EloConfig config;
    config.update_mode = i % 2 ? UpdateMode::sequential : UpdateMode::batch;
    config.rng_seed = gen();
    auto t = run_round_robin(ratings, random_f1s(gen, ratings), config);
    const double drift = std::fabs(sum(t.ratings_after) - sum(ratings));
    worst = std::max(worst, drift / static_cast<double>(t.matches.size()));
    c.expect(drift <= 1e-9 * static_cast<double>(t.matches.size()),
             "cycle " + std::to_string(i) + " drift " + fmt("%.3g", drift));
  }
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 5.0, "runtime " + fmt("%.3f s", elapsed));
  c.note("max drift per match = " + fmt("%.3g", worst) + ", " + fmt("%.3f s", elapsed));
  return c;
}

Criterion ac3() {
  Criterion c("AC3", "hand-oracle tournaments");
  struct Example {
    std::array<std::size_t, 3> errors;  // per class, out of 100
    std::array<double, 3> f1;
    std::array<double, 3> elo;
  };
  const Example examples[] = {{{5, 12, 20}, {0.95, 0.88, 0.80}, {1540, 1500, 1460}},
                              {{10, 14, 18}, {0.90, 0.86, 0.82}, {1520, 1500, 1480}}};
  const char* ids[] = {"A", "B", "C"};
  for (const auto& ex : examples) {
    {
      RatingMap start{{"A", 1500}, {"B", 1500}, {"C", 1500}};
      ScoreMap f1s{{"A", ex.f1[0]}, {"B", ex.f1[1]}, {"C", ex.f1[2]}};
      auto t = run_round_robin(start, f1s, EloConfig{});
      for (int i = 0; i < 3; ++i) {
        c.expect(std::fabs(t.ratings_after.at(ids[i]) - ex.elo[i]) <= 1e-9,
                 std::string("round robin ") + ids[i] + " = " + fmt("%.12f", t.ratings_after.at(ids[i])));
      }
    }
    // Same tournament driven from prediction files through the cycle engine.
    auto gold = testsupport::balanced_test_set("hand-oracle");
    std::vector<PredictionSet> preds;
    for (int i = 0; i < 3; ++i) preds.push_back(testsupport::predictions_with_errors(gold, ids[i], ex.errors[i]));
    auto archive = run_cycle(new_archive({"hand", "toxicity", "en", 2, 1.0}), gold, preds, CycleOptions{});
    for (int i = 0; i < 3; ++i) {
      c.expect(std::fabs(archive.state.history[0].metrics.at(ids[i]).f1 - ex.f1[i]) <= 1e-12,
               std::string("engine f1 ") + ids[i]);
      c.expect(std::fabs(archive.state.ratings.at(ids[i]).elo - ex.elo[i]) <= 1e-9,
               std::string("engine elo ") + ids[i] + " = " + fmt("%.12f", archive.state.ratings.at(ids[i]).elo));
    }
  }
  // Non-transitive draws: A~B and B~C drawn, A beats C.
  c.expect(match_outcome(0.90, 0.86, 0.05) == 0.5 && match_outcome(0.86, 0.82, 0.05) == 0.5 &&
               match_outcome(0.90, 0.82, 0.05) == 1.0,
           "non-transitive draw outcomes");
  return c;
}

Criterion ac4() {
  Criterion c("AC4", "margin rule");
  const double bases[] = {0.0, 0.1, 0.3, 0.45, 0.5, 0.62, 0.8, 0.85, 0.9, 0.949};
  for (double b : bases) {
    c.expect(match_outcome(b + 0.05, b, 0.05) == 0.5, "draw at exactly 0.05 above " + fmt("%.2f", b));
    c.expect(match_outcome(b, b + 0.05, 0.05) == 0.5, "draw at exactly 0.05 below " + fmt("%.2f", b));
    c.expect(match_outcome(b + 0.05 + 1e-9, b, 0.05) == 1.0, "win at 0.05 + 1e-9 above " + fmt("%.2f", b));
    c.expect(match_outcome(b, b + 0.05 + 1e-9, 0.05) == 0.0, "loss at 0.05 + 1e-9 below " + fmt("%.2f", b));
  }
  c.expect(match_outcome(0.90, 0.85, 0.05) == 0.5, "0.90 vs 0.85 draws");
  c.expect(match_outcome(1.0, 0.95, 0.05) == 0.5, "1.00 vs 0.95 draws");
  return c;
}

Criterion ac5() {
  Criterion c("AC5", "batch permutation invariance");
  std::mt19937_64 gen(505);
  for (int i = 0; i < 100; ++i) {
    auto ratings = random_ratings(gen, 3 + gen() % 18);
    EloConfig config;
    auto t = run_round_robin(ratings, random_f1s(gen, ratings), config);
    auto shuffled = t.matches;
    seeded_shuffle(std::span<MatchResult>(shuffled), gen);
    auto again = apply_batch(ratings, shuffled, config.k_factor);
    bool identical = again.size() == t.ratings_after.size();
    for (const auto& [id, r] : t.ratings_after) {
      identical = identical && again.contains(id) && std::memcmp(&again.at(id), &r, sizeof r) == 0;
    }
    c.expect(identical, "cycle " + std::to_string(i));
  }
  return c;
}

Criterion ac6() {
  Criterion c("AC6", "metrics oracle");
  std::mt19937_64 gen(606);
  const Averaging modes[] = {Averaging::binary_positive, Averaging::macro, Averaging::weighted};
  for (int d = 0; d < 200; ++d) {
    const std::size_t k = 2 + gen() % 4;
    std::vector<Label> labels;
    for (std::size_t i = 0; i < k; ++i) labels.push_back("L" + std::to_string(i));
    const std::size_t n = 1 + gen() % 50;
    std::vector<Label> gold;
    std::vector<ParsedLabel> pred;
    for (std::size_t i = 0; i < n; ++i) {
      gold.push_back(labels[gen() % k]);
      if (gen() % 6 == 0) {
        pred.push_back(std::nullopt);
      } else {
        pred.push_back(gen() % 2 ? gold.back() : labels[gen() % k]);
      }
    }
    auto cm = confusion_matrix(gold, pred, labels);
    for (auto avg : modes) {
      if (avg == Averaging::binary_positive && k != 2) continue;
      auto got = classification_metrics(cm, avg);
      auto want = testsupport::oracle_metrics(gold, pred, labels, avg);
      const auto tag = "dataset " + std::to_string(d) + " " + std::string(to_string(avg));
      c.expect(std::fabs(got.accuracy - want.accuracy) <= 1e-12, tag + " accuracy");
      c.expect(std::fabs(got.precision - want.precision) <= 1e-12, tag + " precision");
      c.expect(std::fabs(got.recall - want.recall) <= 1e-12, tag + " recall");
      c.expect(std::fabs(got.f1 - want.f1) <= 1e-12, tag + " f1");
      for (const auto& [label, f] : want.class_f1) {
        c.expect(std::fabs(got.per_class.at(label).f1 - f) <= 1e-12, tag + " class " + label);
      }
    }
  }
  // TP=3, FN=1, FP=1, TN=5 with "pos" as the positive class.
  std::vector<Label> labels{"pos", "neg"};
  std::vector<Label> gold{"pos", "pos", "pos", "pos", "neg", "neg", "neg", "neg", "neg", "neg"};
  std::vector<ParsedLabel> pred{"pos", "pos", "pos", "neg", "pos", "neg", "neg", "neg", "neg", "neg"};
  auto cm = confusion_matrix(gold, pred, labels);
  auto bin = classification_metrics(cm, Averaging::binary_positive);
  c.expect(std::fabs(bin.accuracy - 0.8) <= 1e-12, "binary accuracy 0.8");
  c.expect(std::fabs(bin.precision - 0.75) <= 1e-12, "binary precision 0.75");
  c.expect(std::fabs(bin.recall - 0.75) <= 1e-12, "binary recall 0.75");
  c.expect(std::fabs(bin.f1 - 0.75) <= 1e-12, "binary f1 0.75");
  c.expect(std::fabs(classification_metrics(cm, Averaging::macro).f1 - 19.0 / 24.0) <= 1e-12, "macro f1 0.791666...");
  c.expect(std::fabs(classification_metrics(cm, Averaging::weighted).f1 - 0.8) <= 1e-12, "weighted f1 0.8");
  return c;
}

std::map<std::string, std::array<std::size_t, 3>> class_counts(const DatasetSplit& s) {
  std::map<std::string, std::array<std::size_t, 3>> out;
  const LabeledDataset* parts[] = {&s.train, &s.validation, &s.test};
  for (std::size_t p = 0; p < 3; ++p) {
    for (const auto& item : parts[p]->items) ++out[item.label][p];
  }
  return out;
}

Criterion ac7() {
  Criterion c("AC7", "split policy");
  LabeledDataset balanced;
  balanced.dataset_id = "balanced";
  balanced.label_set = {"TOXIC", "NONTOXIC"};
  for (int i = 0; i < 5000; ++i) {
    balanced.items.push_back({"i" + std::to_string(i), "t", i % 2 ? "TOXIC" : "NONTOXIC"});
  }
  SplitSpec spec;
  spec.seed = 2024;
  auto split = stratified_split(balanced, spec);
  c.expect(split.train.items.size() == 3500, "train 3500");
  c.expect(split.validation.items.size() == 750, "validation 750");
  c.expect(split.test.items.size() == 750, "test 750");
  for (const auto& [label, counts] : class_counts(split)) {
    c.expect(counts == std::array<std::size_t, 3>{1750, 375, 375}, "per-class halves for " + label);
  }

  std::mt19937_64 gen(707);
  for (int d = 0; d < 100; ++d) {
    LabeledDataset ds;
    ds.dataset_id = "imbalanced-" + std::to_string(d);
    const std::size_t k = 2 + gen() % 4;
    std::map<std::string, std::size_t> sizes;
    for (std::size_t l = 0; l < k; ++l) {
      ds.label_set.push_back("c" + std::to_string(l));
      sizes[ds.label_set.back()] = 3 + gen() % (l == 0 ? 600 : 60);
    }
    std::vector<std::string> pool;
    for (const auto& [label, n] : sizes) pool.insert(pool.end(), n, label);
    seeded_shuffle(std::span<std::string>(pool), gen);
    for (std::size_t i = 0; i < pool.size(); ++i) ds.items.push_back({"x" + std::to_string(i), "t", pool[i]});

    SplitSpec s;
    s.seed = gen();
    if (d % 2) {
      const auto a = 10 + gen() % 70, b = 5 + gen() % (90 - a);
      s.proportions = {a / 100.0, b / 100.0, (100 - a - b) / 100.0};
    }
    auto part = stratified_split(ds, s);
    for (const auto& [label, counts] : class_counts(part)) {
      for (std::size_t p = 0; p < 3; ++p) {
        const double quota = static_cast<double>(sizes[label]) * s.proportions[p];
        c.expect(std::fabs(static_cast<double>(counts[p]) - quota) <= 1.0,
                 ds.dataset_id + " " + label + " partition " + std::to_string(p));
      }
    }
    auto again = stratified_split(ds, s);
    c.expect(serialize_dataset(part.train) == serialize_dataset(again.train) &&
                 serialize_dataset(part.validation) == serialize_dataset(again.validation) &&
                 serialize_dataset(part.test) == serialize_dataset(again.test),
             ds.dataset_id + " rerun differs");
  }

  // Through the command line: identical files for the same seed.
  auto dir = testsupport::scratch_dir("acceptance-split");
  write_text_file_atomic(dir / "data.jsonl", serialize_dataset(balanced));
  std::ostringstream out, err;
  for (const char* sub : {"a", "b"}) {
    c.expect(cli::run({"split", (dir / "data.jsonl").string(), "--out-dir", (dir / sub).string(), "--seed", "99"}, out,
                      err) == 0,
             std::string("split run ") + sub);
  }
  for (const char* name : {"train.jsonl", "validation.jsonl", "test.jsonl", "manifest.json"}) {
    c.expect(read_text_file(dir / "a" / name) == read_text_file(dir / "b" / name), std::string("cli ") + name);
  }
  fs::remove_all(dir);
  return c;
}

Criterion ac8() {
  Criterion c("AC8", "default language weights");
  const std::map<std::string, double> expected{{"en", 1.0}, {"de", 1.1}, {"es", 1.2}, {"zh", 1.3},
                                               {"ru", 1.4}, {"ar", 1.5}, {"hi", 1.7}};
  c.expect(default_language_weights() == expected, "table differs");
  c.expect(MetaConfig{}.language_weights == expected, "meta default differs");
  return c;
}

LeaderboardState single_cycle_board(const std::string& lang, const std::map<ModelId, std::pair<double, double>>& entries,
                                    int cycles, int categories) {
  LeaderboardState s;
  s.spec = LeaderboardSpec{lang + "-board", "toxicity", lang, categories, default_language_weights().at(lang)};
  for (int i = 1; i <= cycles; ++i) {
    CycleResult cycle;
    cycle.cycle_index = i;
    for (const auto& [id, ef] : entries) cycle.metrics[id].f1 = ef.second;
    s.history.push_back(cycle);
  }
  s.cycle_count = cycles;
  for (const auto& [id, ef] : entries) s.ratings[id] = Rating{id, ef.first, cycles, RatingStatus::active};
  return s;
}

Criterion ac9() {
  Criterion c("AC9", "meta-elo hand oracle");
  std::vector<LeaderboardState> boards{single_cycle_board("en", {{"m", {1600, 0.95}}}, 1, 2),
                                       single_cycle_board("zh", {{"m", {1500, 0.70}}}, 1, 2)};
  MetaConfig config;
  const auto mean = meta_elo("m", boards, config).meta_elo;
  c.expect(std::fabs(mean - 1551.07) <= 0.01, "normalized mean " + fmt("%.6f", mean) + " vs 1551.07");
  config.mode = MetaMode::raw_sum;
  const auto raw = meta_elo("m", boards, config).meta_elo;
  c.expect(std::fabs(raw - 5648.82) <= 0.01, "raw sum " + fmt("%.6f", raw) + " vs 5648.82");
  c.note("normalized mean = " + fmt("%.6f", mean) + ", raw sum = " + fmt("%.6f", raw));

  std::mt19937_64 gen(909);
  const std::vector<std::string> langs{"en", "de", "es", "zh", "ru", "ar", "hi"};
  std::uniform_real_distribution<double> f1(0.05, 1.0), elo(1000.0, 2000.0);
  for (int i = 0; i < 200; ++i) {
    const double e = elo(gen);
    std::vector<LeaderboardState> set;
    const auto n = 1 + gen() % 6;
    for (std::size_t b = 0; b < n; ++b) {
      set.push_back(single_cycle_board(langs[gen() % langs.size()], {{"m", {e, f1(gen)}}, {"x", {elo(gen), f1(gen)}}},
                                       1 + static_cast<int>(gen() % 5), 2 + static_cast<int>(gen() % 4)));
    }
    MetaConfig cfg;
    if (gen() % 2) cfg.log_base = LogBase::base10;
    if (gen() % 2) cfg.f1_scope = F1Scope::current_cycle;
    const double got = meta_elo("m", set, cfg).meta_elo;
    c.expect(std::fabs(got - e) <= 1e-9, "constant elo case " + std::to_string(i) + " " + fmt("%.12f", got - e));
  }
  return c;
}

LeaderboardArchive random_archive(std::mt19937_64& gen, UpdateMode mode, Criterion& c) {
  auto gold = testsupport::balanced_test_set("lifecycle-test");
  CycleOptions options;
  options.elo.update_mode = mode;
  options.elo.rng_seed = gen();
  auto archive = new_archive({"lifecycle", "toxicity", "en", 2, 1.0});
  const int cycles = 2 + static_cast<int>(gen() % 5);
  for (int cycle = 1; cycle <= cycles; ++cycle) {
    std::vector<PredictionSet> preds;
    for (int m = 0; m < 7; ++m) {
      if (gen() % 3 == 0) continue;
      preds.push_back(testsupport::predictions_with_errors(gold, "M" + std::to_string(m), gen() % 40, gen() % 4));
    }
    if (preds.size() < 2) continue;
    const auto before = archive.state.ratings;
    archive = run_cycle(archive, gold, preds, options);
    const auto& entered = archive.state.history.back().ratings_before;
    for (const auto& [id, r] : before) {
      if (entered.contains(id)) {
        c.expect(entered.at(id) == r.elo, "re-entry of " + id + " at cycle " + std::to_string(cycle));
      } else {
        c.expect(archive.state.ratings.at(id).elo == r.elo, "inactive " + id + " kept its elo");
        c.expect(archive.state.ratings.at(id).status == RatingStatus::inactive, "inactive " + id + " status");
      }
    }
  }
  return archive;
}

// Replaces one digit of the %.6f rendering of `x`; `place` counts from the units digit (0) downwards.
double mutate_digit(double x, int place) {
  std::string s = fmt("%.6f", x);
  const auto dot = s.find('.');
  const auto pos = place <= 0 ? dot - 1 + static_cast<std::size_t>(place) : dot + static_cast<std::size_t>(place);
  s[pos] = s[pos] == '9' ? '0' : static_cast<char>(s[pos] + 1);
  return std::stod(s);
}

Criterion ac10() {
  Criterion c("AC10", "lifecycle and replay");
  std::mt19937_64 gen(1010);
  std::size_t archives = 0, mutations = 0;
  for (int i = 0; i < 40; ++i) {
    auto archive = random_archive(gen, i % 2 ? UpdateMode::sequential : UpdateMode::batch, c);
    if (archive.state.history.empty()) continue;
    ++archives;
    c.expect(replay_verify(archive).ok, "archive " + std::to_string(i) + " replay in memory");
    const auto text = serialize_archive(archive);
    c.expect(replay_verify(parse_archive(text)).ok, "archive " + std::to_string(i) + " replay after reload");

    const auto doc = nlohmann::json::parse(text);
    // Every digit from the hundreds down to the fifth decimal, in a stored cycle result
    // and in the current ratings map.
    for (int place = -2; place <= 5; ++place) {
      auto edited = doc;
      auto& cycle = edited["cycles"][gen() % edited["cycles"].size()];
      auto it = cycle["ratings_after"].begin();
      std::advance(it, static_cast<long>(gen() % cycle["ratings_after"].size()));
      *it = mutate_digit(it->get<double>(), place);
      c.expect(!replay_verify(parse_archive(edited.dump())).ok, "cycle mutation at place " + std::to_string(place));

      auto edited_final = doc;
      auto rit = edited_final["ratings"].begin();
      std::advance(rit, static_cast<long>(gen() % edited_final["ratings"].size()));
      (*rit)["elo"] = mutate_digit((*rit)["elo"].get<double>(), place);
      c.expect(!replay_verify(parse_archive(edited_final.dump())).ok, "ratings mutation at place " + std::to_string(place));
      mutations += 2;
    }
  }
  c.note(std::to_string(archives) + " archives replayed, " + std::to_string(mutations) + " single-digit mutations");
  return c;
}

Criterion ac11(Clock::time_point suite_start) {
  Criterion c("AC11", "end-to-end determinism");
  auto dir = testsupport::scratch_dir("acceptance-determinism");
  auto gold = testsupport::balanced_test_set("en-test");
  write_text_file_atomic(dir / "gold.jsonl", serialize_dataset(gold));
  std::vector<std::string> preds;
  const std::size_t errors[] = {5, 12, 20, 13, 2};
  for (std::size_t m = 0; m < 5; ++m) {
    auto ps = testsupport::predictions_with_errors(gold, "model-" + std::to_string(m), errors[m], m);
    auto path = dir / (ps.model_id + ".jsonl");
    write_text_file_atomic(path, serialize_predictions(ps));
    preds.push_back(path.string());
  }
  for (const char* mode : {"batch", "sequential"}) {
    for (const char* run : {"one", "two"}) {
      fs::create_directories(dir / run);
      auto base = dir / run / mode;
      std::ostringstream out, err;
      for (int cycle = 0; cycle < 2; ++cycle) {
        std::vector<std::string> args{"run-cycle", (base.string() + ".json"), (dir / "gold.jsonl").string()};
        args.insert(args.end(), preds.begin() + cycle, preds.end());
        args.insert(args.end(), {"--language", "en", "--update-mode", mode, "--seed", "17", "--format", "csv",
                                 "--report-out", base.string() + ".csv"});
        c.expect(cli::run(args, out, err) == 0, std::string("run-cycle ") + mode + " " + run + ": " + err.str());
      }
    }
    const auto one = dir / "one" / mode, two = dir / "two" / mode;
    c.expect(read_text_file(one.string() + ".json") == read_text_file(two.string() + ".json"),
             std::string(mode) + " archives differ");
    c.expect(read_text_file(one.string() + ".csv") == read_text_file(two.string() + ".csv"),
             std::string(mode) + " reports differ");
    for (const char* format : {"table", "csv", "lines"}) {
      std::ostringstream a, b, err;
      cli::run({"report", one.string() + ".json", "--format", format}, a, err);
      cli::run({"report", two.string() + ".json", "--format", format}, b, err);
      c.expect(!a.str().empty() && a.str() == b.str(), std::string(mode) + " " + format + " report differs");
    }
  }
  fs::remove_all(dir);
  const double elapsed = seconds_since(suite_start);
  c.expect(elapsed < 60.0, "acceptance runtime " + fmt("%.2f s", elapsed));
  c.note("acceptance suite runtime " + fmt("%.2f s", elapsed));
  return c;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  std::vector<std::function<Criterion()>> gates{ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10,
                                                [start] { return ac11(start); }};
  int failed = 0;
  for (const auto& gate : gates) {
    Criterion c = [&] {
      try {
        return gate();
      } catch (const std::exception& e) {
        Criterion broken("AC?", "threw");
        broken.expect(false, e.what());
        return broken;
      }
    }();
    c.print(std::cout);
    if (!c.passed()) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed\n" : "all criteria passed\n");
  return failed ? 1 : 0;
}
