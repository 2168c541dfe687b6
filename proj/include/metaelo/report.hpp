#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metaelo/meta.hpp"
#include "metaelo/store.hpp"

namespace metaelo {

enum class ReportFormat { table, csv, lines };

std::string_view to_string(ReportFormat f) noexcept;
ReportFormat parse_report_format(std::string_view text);

struct LeaderboardRow {
  int rank = 0;
  ModelId model_id;
  std::string display_name;
  std::optional<double> params_billions;
  Deployment deployment = Deployment::api;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double elo = 0.0;
  bool active = true;
  // Cycle the metrics come from; older than the report's cycle for inactive rows.
  int metrics_cycle = 0;
};

struct LeaderboardReport {
  LeaderboardSpec spec;
  int cycle_index = 0;
  std::string test_set_id;
  EloConfig elo;
  Averaging averaging = Averaging::macro;
  UnparsedPolicy unparsed = UnparsedPolicy::count_wrong;
  // Sorted by f1 desc, then elo desc, then model id.
  std::vector<LeaderboardRow> rows;
};

struct MetaRow {
  ModelId model_id;
  std::string display_name;
  double meta_elo = 0.0;
  double weighted_f1 = 0.0;
  std::vector<std::string> leaderboards;
};

struct ScatterPoint {
  ModelId model_id;
  double weighted_f1 = 0.0;
  double meta_elo = 0.0;
};

struct MetaReport {
  MetaConfig config;
  double display_floor = 0.7;
  std::vector<std::string> leaderboards;
  // Sorted by meta_elo desc, then model id.
  std::vector<MetaRow> rows;
  // Rows with weighted_f1 >= display_floor, in row order.
  std::vector<ScatterPoint> scatter;
};

// Rows for every rated model; inactive models keep their last known metrics.
LeaderboardReport build_leaderboard_report(const LeaderboardArchive& archive);
std::string render_leaderboard(const LeaderboardReport& report, ReportFormat format);

MetaReport build_meta_report(std::span<const LeaderboardArchive> archives, const MetaConfig& config,
                             double display_floor = 0.7);
std::string render_meta(const MetaReport& report, ReportFormat format);
// Two-column CSV (weighted_f1, meta_elo) for plotting.
std::string render_scatter(const MetaReport& report);

}  // namespace metaelo
