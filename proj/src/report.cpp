#include "metaelo/report.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "metaelo/error.hpp"

namespace metaelo {

namespace {

using nlohmann::json;

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string params_text(const std::optional<double>& params) {
  if (!params) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%gB", *params);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Left-aligns text columns and right-aligns the rest.
std::string aligned(const std::vector<std::vector<std::string>>& cells, const std::vector<bool>& left) {
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      const std::string fill(width[c] - row[c].size(), ' ');
      line += left[c] ? row[c] + fill : fill + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> leaderboard_stamps(const LeaderboardReport& r) {
  return {{"leaderboard", r.spec.leaderboard_id},
          {"task", r.spec.task_name},
          {"language", r.spec.language_code},
          {"num_categories", std::to_string(r.spec.num_categories)},
          {"cycle", std::to_string(r.cycle_index)},
          {"test_set", r.test_set_id},
          {"k_factor", fixed(r.elo.k_factor, 6)},
          {"draw_margin", fixed(r.elo.draw_margin, 6)},
          {"baseline", fixed(r.elo.baseline, 6)},
          {"update_mode", std::string(to_string(r.elo.update_mode))},
          {"seed", std::to_string(r.elo.rng_seed)},
          {"averaging", std::string(to_string(r.averaging))},
          {"unparsed", std::string(to_string(r.unparsed))}};
}

std::vector<std::pair<std::string, std::string>> meta_stamps(const MetaReport& r) {
  std::vector<std::string> weights;
  for (const auto& [code, w] : r.config.language_weights) weights.push_back(code + ":" + fixed(w, 6));
  return {{"leaderboards", join(r.leaderboards, ";")},
          {"log_base", std::string(to_string(r.config.log_base))},
          {"meta_mode", std::string(to_string(r.config.mode))},
          {"f1_scope", std::string(to_string(r.config.f1_scope))},
          {"display_floor", fixed(r.display_floor, 6)},
          {"language_weights", join(weights, ";")}};
}

std::string comment_block(const std::vector<std::pair<std::string, std::string>>& stamps) {
  std::string out;
  for (const auto& [k, v] : stamps) out += "# " + k + "=" + v + "\n";
  return out;
}

json stamp_object(const std::vector<std::pair<std::string, std::string>>& stamps) {
  json j = json::object();
  for (const auto& [k, v] : stamps) j[k] = v;
  return j;
}

}  // namespace

std::string_view to_string(ReportFormat f) noexcept {
  switch (f) {
    case ReportFormat::table: return "table";
    case ReportFormat::csv: return "csv";
    case ReportFormat::lines: return "lines";
  }
  return "table";
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "table") return ReportFormat::table;
  if (text == "csv") return ReportFormat::csv;
  if (text == "lines") return ReportFormat::lines;
  throw Error(Errc::Usage, "unknown format '" + std::string(text) + "'");
}

LeaderboardReport build_leaderboard_report(const LeaderboardArchive& archive) {
  const auto& state = archive.state;
  if (state.history.empty()) {
    throw Error(Errc::NoCompletedCycles, "leaderboard '" + state.spec.leaderboard_id + "' has no cycles");
  }
  const auto& last = state.history.back();
  LeaderboardReport report;
  report.spec = state.spec;
  report.cycle_index = last.cycle_index;
  report.test_set_id = last.test_set_id;
  report.elo = last.config_snapshot;
  report.unparsed = last.unparsed_policy;
  if (!last.metrics.empty()) report.averaging = last.metrics.begin()->second.averaging;

  for (const auto& [id, rating] : state.ratings) {
    LeaderboardRow row;
    row.model_id = id;
    row.elo = rating.elo;
    row.active = rating.status == RatingStatus::active;
    if (auto it = archive.catalog.find(id); it != archive.catalog.end()) {
      row.display_name = it->second.display_name;
      row.params_billions = it->second.params_billions;
      row.deployment = it->second.deployment;
    }
    if (row.display_name.empty()) row.display_name = id;
    for (auto c = state.history.rbegin(); c != state.history.rend(); ++c) {
      auto m = c->metrics.find(id);
      if (m == c->metrics.end()) continue;
      row.accuracy = m->second.accuracy;
      row.precision = m->second.precision;
      row.recall = m->second.recall;
      row.f1 = m->second.f1;
      row.metrics_cycle = c->cycle_index;
      break;
    }
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const LeaderboardRow& a, const LeaderboardRow& b) {
    if (a.f1 != b.f1) return a.f1 > b.f1;
    if (a.elo != b.elo) return a.elo > b.elo;
    return a.model_id < b.model_id;
  });
  for (std::size_t i = 0; i < report.rows.size(); ++i) report.rows[i].rank = static_cast<int>(i) + 1;
  return report;
}

std::string render_leaderboard(const LeaderboardReport& report, ReportFormat format) {
  const auto stamps = leaderboard_stamps(report);
  switch (format) {
    case ReportFormat::table: {
      std::vector<std::vector<std::string>> cells{
          {"rank", "model", "params", "deploy", "accuracy", "precision", "recall", "f1", "elo", "status"}};
      for (const auto& r : report.rows) {
        cells.push_back({std::to_string(r.rank), r.display_name, params_text(r.params_billions),
                         r.deployment == Deployment::local ? "L" : "API", fixed(r.accuracy, 3),
                         fixed(r.precision, 3), fixed(r.recall, 3), fixed(r.f1, 3), fixed(r.elo, 1),
                         r.active ? "active" : "inactive"});
      }
      return comment_block(stamps) +
             aligned(cells, {false, true, false, true, false, false, false, false, false, true});
    }
    case ReportFormat::csv: {
      std::string out = comment_block(stamps);
      out += "rank,model_id,display_name,params_billions,deployment,accuracy,precision,recall,f1,elo,active,metrics_cycle\n";
      for (const auto& r : report.rows) {
        out += std::to_string(r.rank) + "," + csv_field(r.model_id) + "," + csv_field(r.display_name) + "," +
               (r.params_billions ? fixed(*r.params_billions, 6) : "") + "," + std::string(to_string(r.deployment)) +
               "," + fixed(r.accuracy, 6) + "," + fixed(r.precision, 6) + "," + fixed(r.recall, 6) + "," +
               fixed(r.f1, 6) + "," + fixed(r.elo, 6) + "," + (r.active ? "true" : "false") + "," +
               std::to_string(r.metrics_cycle) + "\n";
      }
      return out;
    }
    case ReportFormat::lines: {
      std::string out = json{{"stamps", stamp_object(stamps)}}.dump() + "\n";
      for (const auto& r : report.rows) {
        json row{{"rank", r.rank},
                 {"model_id", r.model_id},
                 {"display_name", r.display_name},
                 {"params_billions", r.params_billions ? json(fixed(*r.params_billions, 6)) : json(nullptr)},
                 {"deployment", to_string(r.deployment)},
                 {"accuracy", fixed(r.accuracy, 6)},
                 {"precision", fixed(r.precision, 6)},
                 {"recall", fixed(r.recall, 6)},
                 {"f1", fixed(r.f1, 6)},
                 {"elo", fixed(r.elo, 6)},
                 {"active", r.active},
                 {"metrics_cycle", r.metrics_cycle}};
        out += row.dump() + "\n";
      }
      return out;
    }
  }
  return {};
}

MetaReport build_meta_report(std::span<const LeaderboardArchive> archives, const MetaConfig& config,
                             double display_floor) {
  if (archives.empty()) throw Error(Errc::NoCompletedCycles, "no leaderboards supplied");
  std::vector<LeaderboardState> boards;
  boards.reserve(archives.size());
  MetaReport report;
  report.config = config;
  report.display_floor = display_floor;
  std::map<ModelId, std::string> names;
  for (const auto& a : archives) {
    boards.push_back(a.state);
    report.leaderboards.push_back(a.state.spec.leaderboard_id);
    for (const auto& [id, record] : a.catalog) names.emplace(id, record.display_name);
  }

  for (auto& entry : meta_elo_all(boards, config)) {
    MetaRow row{entry.model_id, names.contains(entry.model_id) ? names[entry.model_id] : entry.model_id,
                entry.meta_elo, entry.weighted_f1, {}};
    if (row.display_name.empty()) row.display_name = row.model_id;
    for (const auto& c : entry.contributing) row.leaderboards.push_back(c.leaderboard_id);
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const MetaRow& a, const MetaRow& b) {
    if (a.meta_elo != b.meta_elo) return a.meta_elo > b.meta_elo;
    return a.model_id < b.model_id;
  });
  for (const auto& row : report.rows) {
    if (row.weighted_f1 >= display_floor) report.scatter.push_back({row.model_id, row.weighted_f1, row.meta_elo});
  }
  return report;
}

std::string render_meta(const MetaReport& report, ReportFormat format) {
  const auto stamps = meta_stamps(report);
  switch (format) {
    case ReportFormat::table: {
      std::vector<std::vector<std::string>> cells{{"rank", "model", "meta_elo", "weighted_f1", "leaderboards"}};
      int rank = 0;
      for (const auto& r : report.rows) {
        cells.push_back({std::to_string(++rank), r.display_name, fixed(r.meta_elo, 1), fixed(r.weighted_f1, 3),
                         join(r.leaderboards, ",")});
      }
      return comment_block(stamps) + aligned(cells, {false, true, false, false, true});
    }
    case ReportFormat::csv: {
      std::string out = comment_block(stamps) + "rank,model_id,display_name,meta_elo,weighted_f1,leaderboards\n";
      int rank = 0;
      for (const auto& r : report.rows) {
        out += std::to_string(++rank) + "," + csv_field(r.model_id) + "," + csv_field(r.display_name) + "," +
               fixed(r.meta_elo, 6) + "," + fixed(r.weighted_f1, 6) + "," + csv_field(join(r.leaderboards, ";")) +
               "\n";
      }
      return out;
    }
    case ReportFormat::lines: {
      std::string out = json{{"stamps", stamp_object(stamps)}}.dump() + "\n";
      int rank = 0;
      for (const auto& r : report.rows) {
        out += json{{"rank", ++rank},
                    {"model_id", r.model_id},
                    {"display_name", r.display_name},
                    {"meta_elo", fixed(r.meta_elo, 6)},
                    {"weighted_f1", fixed(r.weighted_f1, 6)},
                    {"leaderboards", r.leaderboards}}
                   .dump() +
               "\n";
      }
      return out;
    }
  }
  return {};
}

std::string render_scatter(const MetaReport& report) {
  std::string out = "weighted_f1,meta_elo\n";
  for (const auto& p : report.scatter) out += fixed(p.weighted_f1, 6) + "," + fixed(p.meta_elo, 6) + "\n";
  return out;
}

}  // namespace metaelo
