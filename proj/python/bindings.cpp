#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "metaelo/cli.hpp"
#include "metaelo/data.hpp"
#include "metaelo/error.hpp"
#include "metaelo/meta.hpp"
#include "metaelo/metrics.hpp"
#include "metaelo/store.hpp"

namespace py = pybind11;
using namespace metaelo;

namespace {

py::dict metrics_dict(const MetricSet& m) {
  py::dict per_class;
  for (const auto& [label, s] : m.per_class) {
    py::dict c;
    c["precision"] = s.precision;
    c["recall"] = s.recall;
    c["f1"] = s.f1;
    c["support"] = s.support;
    per_class[py::str(label)] = c;
  }
  py::dict d;
  d["accuracy"] = m.accuracy;
  d["precision"] = m.precision;
  d["recall"] = m.recall;
  d["f1"] = m.f1;
  d["averaging"] = std::string(to_string(m.averaging));
  d["per_class"] = per_class;
  return d;
}

py::dict weights_dict(const WeightBreakdown& w) {
  py::dict d;
  d["w_task"] = w.w_task;
  d["w_language"] = w.w_language;
  d["w_f1"] = w.w_f1;
  d["w_cycle"] = w.w_cycle;
  d["w_total"] = w.w_total;
  return d;
}

MetaConfig meta_config(const std::string& log_base, const std::string& mode, const std::string& f1_scope,
                       const std::optional<std::map<std::string, double>>& language_weights) {
  MetaConfig c;
  c.log_base = parse_log_base(log_base);
  c.mode = parse_meta_mode(mode);
  c.f1_scope = parse_f1_scope(f1_scope);
  if (language_weights) {
    for (const auto& [code, w] : *language_weights) c.language_weights[code] = w;
  }
  c.validate();
  return c;
}

std::vector<LeaderboardState> load_states(const std::vector<std::filesystem::path>& paths) {
  std::vector<LeaderboardState> states;
  for (const auto& p : paths) states.push_back(load_archive(p).state);
  return states;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Margin-based Elo leaderboards and Meta-Elo aggregation";

  py::register_exception<Error>(m, "MetaEloError", PyExc_ValueError);

  m.def(
      "expected_score",
      [](double r_a, double r_b) {
        auto e = expected_score(r_a, r_b);
        return py::make_tuple(e.a, e.b);
      },
      py::arg("r_a"), py::arg("r_b"));
  m.def("match_outcome", &match_outcome, py::arg("f1_a"), py::arg("f1_b"), py::arg("draw_margin") = 0.05);
  m.def("update_pair", &update_pair, py::arg("r_a"), py::arg("r_b"), py::arg("s_a"), py::arg("e_a"),
        py::arg("k") = 40.0);

  m.def(
      "run_round_robin",
      [](const RatingMap& ratings, const ScoreMap& f1s, double k_factor, double draw_margin, double baseline,
         const std::string& update_mode, std::uint64_t seed) {
        EloConfig config{k_factor, draw_margin, baseline, parse_update_mode(update_mode), seed};
        auto result = run_round_robin(ratings, f1s, config);
        py::list matches;
        for (const auto& mr : result.matches) {
          py::dict d;
          d["model_a"] = mr.model_a;
          d["model_b"] = mr.model_b;
          d["f1_a"] = mr.f1_a;
          d["f1_b"] = mr.f1_b;
          d["s_a"] = mr.s_a;
          d["e_a"] = mr.e_a;
          matches.append(d);
        }
        py::dict out;
        out["matches"] = matches;
        out["ratings_after"] = result.ratings_after;
        return out;
      },
      py::arg("ratings"), py::arg("f1s"), py::arg("k_factor") = 40.0, py::arg("draw_margin") = 0.05,
      py::arg("baseline") = 1500.0, py::arg("update_mode") = "batch", py::arg("seed") = 0);

  m.def(
      "normalize_label", [](const std::string& raw, const std::vector<Label>& labels) { return normalize_label(raw, labels); },
      py::arg("raw"), py::arg("labels"));

  m.def(
      "classification_metrics",
      [](const std::vector<Label>& gold, const std::vector<ParsedLabel>& pred, const std::vector<Label>& labels,
         const std::string& averaging, const std::string& unparsed, std::optional<std::string> positive) {
        auto cm = confusion_matrix(gold, pred, labels, parse_unparsed_policy(unparsed));
        std::optional<std::string_view> pos;
        if (positive) pos = *positive;
        auto d = metrics_dict(classification_metrics(cm, parse_averaging(averaging), pos));
        d["counts"] = cm.counts;
        d["unparsed"] = cm.unparsed;
        return d;
      },
      py::arg("gold"), py::arg("pred"), py::arg("labels"), py::arg("averaging") = "macro",
      py::arg("unparsed") = "wrong", py::arg("positive") = py::none());

  m.def("default_language_weights", &default_language_weights);

  m.def(
      "weight_components",
      [](int num_categories, const std::string& language, double model_f1, double global_max_f1, int cycle_count,
         const std::string& log_base, const std::optional<std::map<std::string, double>>& language_weights) {
        LeaderboardSpec spec{"adhoc", "adhoc", language, num_categories, 1.0};
        return weights_dict(weight_components(spec, model_f1, global_max_f1, cycle_count,
                                              meta_config(log_base, "mean", "all", language_weights)));
      },
      py::arg("num_categories"), py::arg("language"), py::arg("model_f1"), py::arg("global_max_f1"),
      py::arg("cycle_count"), py::arg("log_base") = "e", py::arg("language_weights") = py::none());

  m.def(
      "stratified_split",
      [](const std::vector<std::tuple<std::string, std::string, std::string>>& items,
         const std::array<double, 3>& proportions, std::uint64_t seed, bool stratified) {
        LabeledDataset ds;
        ds.dataset_id = "adhoc";
        for (const auto& [id, text, label] : items) {
          ds.items.push_back({id, text, label});
          if (std::find(ds.label_set.begin(), ds.label_set.end(), label) == ds.label_set.end()) {
            ds.label_set.push_back(label);
          }
        }
        if (ds.items.empty()) throw Error(Errc::EmptyDataset, "no items");
        auto split = stratified_split(ds, SplitSpec{proportions, seed, stratified});
        auto ids = [](const LabeledDataset& part) {
          std::vector<std::string> out;
          for (const auto& item : part.items) out.push_back(item.item_id);
          return out;
        };
        return py::make_tuple(ids(split.train), ids(split.validation), ids(split.test));
      },
      py::arg("items"), py::arg("proportions") = std::array<double, 3>{0.70, 0.15, 0.15}, py::arg("seed") = 0,
      py::arg("stratified") = true);

  m.def(
      "archive_ratings",
      [](const std::filesystem::path& path) {
        py::dict out;
        for (const auto& [id, r] : load_archive(path).state.ratings) {
          py::dict d;
          d["elo"] = r.elo;
          d["active"] = r.status == RatingStatus::active;
          d["last_active_cycle"] = r.last_active_cycle;
          out[py::str(id)] = d;
        }
        return out;
      },
      py::arg("path"));

  m.def(
      "verify_archive",
      [](const std::filesystem::path& path) {
        auto verdict = replay_verify(load_archive(path));
        return py::make_tuple(verdict.ok, verdict.cycle, verdict.detail);
      },
      py::arg("path"));

  m.def(
      "meta_elo",
      [](const std::vector<std::filesystem::path>& archives, const std::string& log_base, const std::string& mode,
         const std::string& f1_scope, const std::optional<std::map<std::string, double>>& language_weights) {
        auto states = load_states(archives);
        py::dict out;
        for (const auto& entry : meta_elo_all(states, meta_config(log_base, mode, f1_scope, language_weights))) {
          py::list contributing;
          for (const auto& c : entry.contributing) {
            py::dict d;
            d["leaderboard_id"] = c.leaderboard_id;
            d["elo"] = c.elo;
            d["f1"] = c.f1;
            d["weights"] = weights_dict(c.weights);
            contributing.append(d);
          }
          py::dict d;
          d["meta_elo"] = entry.meta_elo;
          d["weighted_f1"] = entry.weighted_f1;
          d["contributing"] = contributing;
          out[py::str(entry.model_id)] = d;
        }
        return out;
      },
      py::arg("archives"), py::arg("log_base") = "e", py::arg("mode") = "mean", py::arg("f1_scope") = "all",
      py::arg("language_weights") = py::none());

  m.def(
      "cli_main",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a metaelo command line; returns (exit_code, stdout, stderr).");
}
