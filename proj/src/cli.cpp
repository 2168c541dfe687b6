#include "metaelo/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "metaelo/canonical_json.hpp"
#include "metaelo/data.hpp"
#include "metaelo/engine.hpp"
#include "metaelo/error.hpp"
#include "metaelo/report.hpp"

namespace metaelo::cli {

namespace fs = std::filesystem;

namespace {

struct EloFlags {
  double k_factor = 40.0;
  double draw_margin = 0.05;
  double baseline = 1500.0;
  std::string update_mode = "batch";
  std::uint64_t seed = 0;

  EloConfig config() const { return {k_factor, draw_margin, baseline, parse_update_mode(update_mode), seed}; }
};

struct MetaFlags {
  std::string log_base = "e";
  std::string meta_mode = "mean";
  std::string f1_scope = "all";
  double display_floor = 0.7;
  std::vector<std::string> language_weights;
  std::string scatter_out;

  MetaConfig config() const {
    MetaConfig c;
    c.log_base = parse_log_base(log_base);
    c.mode = parse_meta_mode(meta_mode);
    c.f1_scope = parse_f1_scope(f1_scope);
    for (const auto& entry : language_weights) {
      auto eq = entry.find('=');
      if (eq == std::string::npos || eq == 0) throw Error(Errc::Usage, "--language-weight expects code=value");
      double w = 0.0;
      try {
        w = std::stod(entry.substr(eq + 1));
      } catch (const std::exception&) {
        throw Error(Errc::Usage, "bad weight in '" + entry + "'");
      }
      c.language_weights[entry.substr(0, eq)] = w;
    }
    c.validate();
    return c;
  }
};

LabeledDataset load_dataset(const std::string& path) {
  return parse_dataset(read_text_file(path), fs::path(path).stem().string());
}

std::vector<PredictionSet> load_predictions(const std::vector<std::string>& paths) {
  std::vector<PredictionSet> out;
  for (const auto& p : paths) {
    try {
      out.push_back(parse_predictions(read_text_file(p)));
    } catch (const Error& e) {
      throw Error(e.code(), p + ": " + e.detail(), e.line());
    }
  }
  return out;
}

std::vector<double> parse_proportions(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(Errc::DegenerateProportions, "cannot read proportion '" + part + "'");
    }
  }
  if (out.size() != 3) throw Error(Errc::DegenerateProportions, "expected three proportions, got " + text);
  return out;
}

void emit(std::ostream& out, const std::string& text, const std::string& path) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file_atomic(path, text);
  }
}

int cmd_split(const std::string& dataset_path, const std::string& out_dir, const std::string& proportions,
              std::uint64_t seed, bool no_stratify, std::ostream& out) {
  auto dataset = load_dataset(dataset_path);
  SplitSpec spec;
  auto props = parse_proportions(proportions);
  std::copy(props.begin(), props.end(), spec.proportions.begin());
  spec.seed = seed;
  spec.stratified = !no_stratify;
  auto split = stratified_split(dataset, spec);

  fs::create_directories(out_dir);
  const std::pair<const char*, const LabeledDataset*> parts[] = {
      {"train", &split.train}, {"validation", &split.validation}, {"test", &split.test}};
  nlohmann::json manifest{{"dataset_id", dataset.dataset_id},
                          {"seed", seed},
                          {"stratified", spec.stratified},
                          {"proportions", spec.proportions},
                          {"label_set", dataset.label_set},
                          {"total", dataset.items.size()}};
  for (const auto& [name, part] : parts) {
    write_text_file_atomic(fs::path(out_dir) / (std::string(name) + ".jsonl"), serialize_dataset(*part));
    nlohmann::json per_class = nlohmann::json::object();
    for (const auto& label : dataset.label_set) per_class[label] = 0;
    for (const auto& item : part->items) per_class[item.label] = per_class[item.label].get<std::size_t>() + 1;
    manifest["partitions"][name] = {{"dataset_id", part->dataset_id}, {"count", part->items.size()},
                                    {"per_class", per_class}};
    out << name << ": " << part->items.size() << " items -> " << (fs::path(out_dir) / name).string() << ".jsonl\n";
  }
  write_text_file_atomic(fs::path(out_dir) / "manifest.json", canonical_dump(manifest));
  return kExitOk;
}

int cmd_evaluate(const std::string& gold_path, const std::vector<std::string>& pred_paths,
                 const std::string& averaging, const std::string& unparsed, const std::string& format,
                 std::ostream& out) {
  auto gold = load_dataset(gold_path);
  auto preds = load_predictions(pred_paths);
  const auto avg = parse_averaging(averaging);
  const auto policy = parse_unparsed_policy(unparsed);
  const auto fmt = parse_report_format(format);

  struct Row {
    ModelId id;
    ModelEvaluation eval;
  };
  std::vector<Row> rows;
  for (const auto& p : preds) rows.push_back({p.model_id, evaluate_predictions(gold, p, avg, policy)});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.eval.metrics.f1 != b.eval.metrics.f1) return a.eval.metrics.f1 > b.eval.metrics.f1;
    return a.id < b.id;
  });

  auto f6 = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return std::string(buf);
  };
  out << "# test_set=" << gold.dataset_id << "\n# averaging=" << to_string(avg) << "\n# unparsed=" << to_string(policy)
      << "\n";
  if (fmt == ReportFormat::lines) {
    for (const auto& r : rows) {
      out << nlohmann::json{{"model_id", r.id},
                            {"metrics", metric_set_to_json(r.eval.metrics)},
                            {"unparsed", r.eval.confusion.unparsed},
                            {"missing", r.eval.missing}}
                 .dump()
          << "\n";
    }
    return kExitOk;
  }
  const char* sep = fmt == ReportFormat::csv ? "," : "\t";
  out << "model_id" << sep << "accuracy" << sep << "precision" << sep << "recall" << sep << "f1" << sep << "unparsed"
      << sep << "missing\n";
  for (const auto& r : rows) {
    const auto& m = r.eval.metrics;
    out << r.id << sep << f6(m.accuracy) << sep << f6(m.precision) << sep << f6(m.recall) << sep << f6(m.f1) << sep
        << r.eval.confusion.unparsed << sep << r.eval.missing << "\n";
  }
  return kExitOk;
}

struct NewBoardFlags {
  std::string leaderboard_id;
  std::string task = "classification";
  std::string language;
  int num_categories = 0;
  double language_weight = 0.0;
};

int cmd_run_cycle(const std::string& archive_path, const std::string& gold_path,
                  const std::vector<std::string>& pred_paths, const NewBoardFlags& board, const EloFlags& elo,
                  bool new_test_set, const std::string& averaging, const std::string& unparsed,
                  const std::string& format, const std::string& report_out, std::ostream& out) {
  auto gold = load_dataset(gold_path);
  auto preds = load_predictions(pred_paths);

  LeaderboardArchive archive;
  if (fs::exists(archive_path)) {
    archive = load_archive(archive_path);
  } else {
    LeaderboardSpec spec;
    spec.leaderboard_id = board.leaderboard_id.empty() ? fs::path(archive_path).stem().string() : board.leaderboard_id;
    spec.task_name = board.task;
    if (board.language.empty()) throw Error(Errc::Usage, "--language is required to create a new archive");
    spec.language_code = board.language;
    spec.num_categories = board.num_categories > 0 ? board.num_categories : static_cast<int>(gold.label_set.size());
    if (board.language_weight > 0.0) {
      spec.language_weight = board.language_weight;
    } else {
      const auto& table = default_language_weights();
      auto it = table.find(spec.language_code);
      if (it == table.end()) {
        throw Error(Errc::UnknownLanguage, "no default weight for '" + spec.language_code +
                                               "'; pass --language-weight");
      }
      spec.language_weight = it->second;
    }
    archive = new_archive(std::move(spec));
  }

  CycleOptions options;
  options.elo = elo.config();
  options.averaging = parse_averaging(averaging);
  options.unparsed = parse_unparsed_policy(unparsed);
  options.replace_test_set = new_test_set;
  const auto fmt = parse_report_format(format);

  archive = run_cycle(std::move(archive), gold, preds, options);
  save_archive(archive_path, archive);
  emit(out, render_leaderboard(build_leaderboard_report(archive), fmt), report_out);
  return kExitOk;
}

int cmd_meta(const std::vector<std::string>& archive_paths, const MetaFlags& flags, const std::string& format,
             std::ostream& out) {
  std::vector<LeaderboardArchive> archives;
  for (const auto& p : archive_paths) archives.push_back(load_archive(p));
  auto report = build_meta_report(archives, flags.config(), flags.display_floor);
  out << render_meta(report, parse_report_format(format));
  if (!flags.scatter_out.empty()) write_text_file_atomic(flags.scatter_out, render_scatter(report));
  return kExitOk;
}

int cmd_report(const std::string& archive_path, const std::string& format, std::ostream& out) {
  auto archive = load_archive(archive_path);
  out << render_leaderboard(build_leaderboard_report(archive), parse_report_format(format));
  return kExitOk;
}

int cmd_verify(const std::vector<std::string>& archive_paths, std::ostream& out) {
  int status = kExitOk;
  for (const auto& p : archive_paths) {
    try {
      auto verdict = replay_verify(load_archive(p));
      if (verdict.ok) {
        out << p << ": ok (" << verdict.detail << ")\n";
      } else {
        status = kExitIntegrity;
        out << p << ": DIVERGED at "
            << (verdict.cycle && *verdict.cycle > 0 ? "cycle " + std::to_string(*verdict.cycle) : "current ratings")
            << ": " << verdict.detail << "\n";
      }
    } catch (const Error& e) {
      if (e.code() == Errc::Io) throw;
      status = kExitIntegrity;
      out << p << ": CORRUPT: " << e.what() << "\n";
    }
  }
  return status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Leaderboard engine: classifier metrics, margin-based Elo cycles and Meta-Elo aggregation", "metaelo"};
  app.require_subcommand(1);

  std::string format = "table";
  std::string averaging = "macro";
  std::string unparsed = "wrong";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv", "lines"}));
  };
  auto add_eval = [&](CLI::App* cmd) {
    cmd->add_option("--averaging", averaging, "Metric averaging")
        ->check(CLI::IsMember({"binary", "macro", "weighted"}));
    cmd->add_option("--unparsed", unparsed, "Unparseable outputs: count as wrong, or drop")
        ->check(CLI::IsMember({"wrong", "drop"}));
  };

  // split
  std::string split_dataset, split_out, split_props = "0.7,0.15,0.15";
  std::uint64_t split_seed = 0;
  bool no_stratify = false;
  auto* split = app.add_subcommand("split", "Stratified train/validation/test split of a dataset");
  split->add_option("dataset", split_dataset, "Dataset (JSON Lines)")->required();
  split->add_option("--out-dir", split_out, "Output directory")->required();
  split->add_option("--proportions", split_props, "train,validation,test");
  split->add_option("--seed", split_seed, "Shuffle seed");
  split->add_flag("--no-stratify", no_stratify, "Split without per-class stratification");

  // evaluate
  std::string eval_gold;
  std::vector<std::string> eval_preds;
  auto* evaluate = app.add_subcommand("evaluate", "Score prediction files against a gold test set");
  evaluate->add_option("gold", eval_gold, "Gold test set")->required();
  evaluate->add_option("predictions", eval_preds, "Prediction files")->required();
  add_eval(evaluate);
  add_format(evaluate);

  // run-cycle
  std::string rc_archive, rc_gold, report_out;
  std::vector<std::string> rc_preds;
  NewBoardFlags board;
  EloFlags elo;
  bool new_test_set = false;
  auto* run_cycle_cmd = app.add_subcommand("run-cycle", "Evaluate, run the round robin and append a cycle");
  run_cycle_cmd->add_option("archive", rc_archive, "Leaderboard archive (created if absent)")->required();
  run_cycle_cmd->add_option("gold", rc_gold, "Gold test set")->required();
  run_cycle_cmd->add_option("predictions", rc_preds, "Prediction files")->required();
  run_cycle_cmd->add_option("--leaderboard-id", board.leaderboard_id, "Id for a new archive");
  run_cycle_cmd->add_option("--task", board.task, "Task name for a new archive");
  run_cycle_cmd->add_option("--language", board.language, "Language code for a new archive");
  run_cycle_cmd->add_option("--num-categories", board.num_categories, "Defaults to the gold label count");
  run_cycle_cmd->add_option("--language-weight", board.language_weight, "Defaults to the built-in table");
  run_cycle_cmd->add_flag("--new-test-set", new_test_set, "Replace the archive's fixed test set");
  run_cycle_cmd->add_option("--k-factor", elo.k_factor, "Elo K-factor");
  run_cycle_cmd->add_option("--draw-margin", elo.draw_margin, "F1 gap at or below which a match is drawn");
  run_cycle_cmd->add_option("--baseline", elo.baseline, "Entry rating");
  run_cycle_cmd->add_option("--update-mode", elo.update_mode, "Rating update timing")
      ->check(CLI::IsMember({"batch", "sequential"}));
  run_cycle_cmd->add_option("--seed", elo.seed, "Match order seed (sequential mode)");
  run_cycle_cmd->add_option("--report-out", report_out, "Write the report here instead of stdout");
  add_eval(run_cycle_cmd);
  add_format(run_cycle_cmd);

  // meta
  std::vector<std::string> meta_archives;
  MetaFlags meta;
  auto* meta_cmd = app.add_subcommand("meta", "Meta-Elo and weighted F1 across leaderboards");
  meta_cmd->add_option("archives", meta_archives, "Leaderboard archives")->required();
  meta_cmd->add_option("--log-base", meta.log_base, "Logarithm base for task and cycle weights")
      ->check(CLI::IsMember({"e", "10"}));
  meta_cmd->add_option("--meta-mode", meta.meta_mode, "Weighted mean or raw weighted sum")
      ->check(CLI::IsMember({"mean", "sum"}));
  meta_cmd->add_option("--f1-scope", meta.f1_scope, "Cycles spanned by the F1 normalizer")
      ->check(CLI::IsMember({"all", "current"}));
  meta_cmd->add_option("--display-floor", meta.display_floor, "Minimum weighted F1 for the scatter series");
  meta_cmd->add_option("--language-weight", meta.language_weights, "Override or add a weight, code=value");
  meta_cmd->add_option("--scatter-out", meta.scatter_out, "Write (weighted_f1, meta_elo) plot data here");
  add_format(meta_cmd);

  // report
  std::string report_archive;
  auto* report_cmd = app.add_subcommand("report", "Render the latest leaderboard of an archive");
  report_cmd->add_option("archive", report_archive, "Leaderboard archive")->required();
  add_format(report_cmd);

  // verify
  std::vector<std::string> verify_archives;
  auto* verify_cmd = app.add_subcommand("verify", "Replay every cycle and check the stored ratings");
  verify_cmd->add_option("archives", verify_archives, "Leaderboard archives")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*split) return cmd_split(split_dataset, split_out, split_props, split_seed, no_stratify, out);
    if (*evaluate) return cmd_evaluate(eval_gold, eval_preds, averaging, unparsed, format, out);
    if (*run_cycle_cmd) {
      return cmd_run_cycle(rc_archive, rc_gold, rc_preds, board, elo, new_test_set, averaging, unparsed, format,
                           report_out, out);
    }
    if (*meta_cmd) return cmd_meta(meta_archives, meta, format, out);
    if (*report_cmd) return cmd_report(report_archive, format, out);
    if (*verify_cmd) return cmd_verify(verify_archives, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_integrity_error(e.code()) ? kExitIntegrity : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace metaelo::cli
