#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metaelo/registry.hpp"

namespace metaelo {

enum class LogBase { natural, base10 };
enum class MetaMode { normalized_mean, raw_sum };
// Which cycles the F1 normalizer (max F1) ranges over.
enum class F1Scope { all_cycles, current_cycle };

std::string_view to_string(LogBase b) noexcept;
std::string_view to_string(MetaMode m) noexcept;
std::string_view to_string(F1Scope s) noexcept;
LogBase parse_log_base(std::string_view text);
MetaMode parse_meta_mode(std::string_view text);
F1Scope parse_f1_scope(std::string_view text);

struct MetaConfig {
  LogBase log_base = LogBase::natural;
  MetaMode mode = MetaMode::normalized_mean;
  std::map<std::string, double> language_weights = default_language_weights();
  F1Scope f1_scope = F1Scope::all_cycles;

  void validate() const;
};

struct WeightBreakdown {
  double w_task = 0.0;
  double w_language = 0.0;
  double w_f1 = 0.0;
  double w_cycle = 0.0;
  double w_total = 0.0;
};

struct Contribution {
  std::string leaderboard_id;
  double elo = 0.0;
  double f1 = 0.0;
  WeightBreakdown weights;
};

struct MetaEloEntry {
  ModelId model_id;
  double meta_elo = 0.0;
  double weighted_f1 = 0.0;
  std::vector<Contribution> contributing;
  MetaMode mode = MetaMode::normalized_mean;
};

WeightBreakdown weight_components(const LeaderboardSpec& spec, double model_f1, double global_max_f1,
                                  int cycle_count, const MetaConfig& config);

// F1 from the latest cycle the model played on this leaderboard.
std::optional<double> latest_f1(const LeaderboardState& state, const ModelId& model_id);

/// Normalizer for w_f1.
///
/// all_cycles: max over every cycle of every leaderboard. current_cycle: max
/// over each rated model's latest F1, so holdover ratings never get w_f1 > 1.
double global_max_f1(std::span<const LeaderboardState> boards, F1Scope scope);

/// Cross-leaderboard aggregate of one model's Elo.
///
/// raw_sum is the plain weighted sum; normalized_mean divides by the weight sum
/// so the result stays on the Elo scale. Inactive ratings contribute their last
/// known elo.
MetaEloEntry meta_elo(const ModelId& model_id, std::span<const LeaderboardState> boards,
                      const MetaConfig& config);

// Same weights applied to latest-cycle F1, always as a weighted mean.
double weighted_f1_across(const ModelId& model_id, std::span<const LeaderboardState> boards,
                          const MetaConfig& config);

// meta_elo for every model rated on at least one board, ordered by model id.
std::vector<MetaEloEntry> meta_elo_all(std::span<const LeaderboardState> boards, const MetaConfig& config);

}  // namespace metaelo
