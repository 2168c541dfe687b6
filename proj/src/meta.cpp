#include "metaelo/meta.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "metaelo/error.hpp"

namespace metaelo {

namespace {

double log_in(LogBase base, double x) { return base == LogBase::base10 ? std::log10(x) : std::log(x); }

struct Weighted {
  std::vector<Contribution> parts;
  double weight_sum = 0.0;
};

Weighted contributions(const ModelId& model_id, std::span<const LeaderboardState> boards,
                       const MetaConfig& config) {
  const double max_f1 = global_max_f1(boards, config.f1_scope);
  Weighted out;
  for (const auto& board : boards) {
    auto it = board.ratings.find(model_id);
    if (it == board.ratings.end()) continue;
    if (board.cycle_count < 1 || board.history.empty()) {
      throw Error(Errc::NoCompletedCycles, "leaderboard '" + board.spec.leaderboard_id + "' has no cycles");
    }
    // A rating with no recorded play carries no F1; treat it as zero weight.
    const double f1 = latest_f1(board, model_id).value_or(0.0);
    Contribution c{board.spec.leaderboard_id, it->second.elo, f1,
                   weight_components(board.spec, f1, max_f1, board.cycle_count, config)};
    out.weight_sum += c.weights.w_total;
    out.parts.push_back(std::move(c));
  }
  if (out.parts.empty()) {
    throw Error(Errc::ModelInNoLeaderboard, "model '" + model_id + "' is not rated on any leaderboard");
  }
  return out;
}

}  // namespace

std::string_view to_string(LogBase b) noexcept { return b == LogBase::base10 ? "10" : "e"; }

std::string_view to_string(MetaMode m) noexcept { return m == MetaMode::raw_sum ? "sum" : "mean"; }

std::string_view to_string(F1Scope s) noexcept { return s == F1Scope::current_cycle ? "current" : "all"; }

LogBase parse_log_base(std::string_view text) {
  if (text == "e" || text == "natural") return LogBase::natural;
  if (text == "10" || text == "base10") return LogBase::base10;
  throw Error(Errc::Usage, "unknown log base '" + std::string(text) + "'");
}

MetaMode parse_meta_mode(std::string_view text) {
  if (text == "mean" || text == "normalized_mean") return MetaMode::normalized_mean;
  if (text == "sum" || text == "raw_sum") return MetaMode::raw_sum;
  throw Error(Errc::Usage, "unknown meta mode '" + std::string(text) + "'");
}

F1Scope parse_f1_scope(std::string_view text) {
  if (text == "all" || text == "all_cycles") return F1Scope::all_cycles;
  if (text == "current" || text == "current_cycle") return F1Scope::current_cycle;
  throw Error(Errc::Usage, "unknown F1 scope '" + std::string(text) + "'");
}

void MetaConfig::validate() const {
  auto en = language_weights.find("en");
  if (en == language_weights.end()) throw Error(Errc::InvalidConfig, "language weight table needs 'en'");
  for (const auto& [code, w] : language_weights) {
    if (!std::isfinite(w) || w <= 0.0) throw Error(Errc::InvalidConfig, "weight for '" + code + "' must be > 0");
  }
}

WeightBreakdown weight_components(const LeaderboardSpec& spec, double model_f1, double global_max_f1,
                                  int cycle_count, const MetaConfig& config) {
  if (!(global_max_f1 > 0.0)) throw Error(Errc::ZeroMaxF1, "maximum F1 across leaderboards is zero");
  if (cycle_count < 1) throw Error(Errc::NoCompletedCycles, "cycle_count must be >= 1");
  if (!(model_f1 >= 0.0 && model_f1 <= global_max_f1)) {
    throw Error(Errc::OutOfRangeF1, "model F1 outside [0, max F1]");
  }
  auto lang = config.language_weights.find(spec.language_code);
  if (lang == config.language_weights.end()) {
    throw Error(Errc::UnknownLanguage, "no weight for language '" + spec.language_code + "'");
  }
  WeightBreakdown w;
  w.w_task = log_in(config.log_base, spec.num_categories + 1.0);
  w.w_language = lang->second;
  w.w_f1 = model_f1 / global_max_f1;
  w.w_cycle = 1.0 + log_in(config.log_base, cycle_count + 1.0);
  w.w_total = w.w_task * w.w_language * w.w_f1 * w.w_cycle;
  return w;
}

std::optional<double> latest_f1(const LeaderboardState& state, const ModelId& model_id) {
  for (auto it = state.history.rbegin(); it != state.history.rend(); ++it) {
    auto m = it->metrics.find(model_id);
    if (m != it->metrics.end()) return m->second.f1;
  }
  return std::nullopt;
}

double global_max_f1(std::span<const LeaderboardState> boards, F1Scope scope) {
  double best = 0.0;
  for (const auto& board : boards) {
    if (scope == F1Scope::all_cycles) {
      for (const auto& cycle : board.history) {
        for (const auto& [id, m] : cycle.metrics) best = std::max(best, m.f1);
      }
    } else {
      for (const auto& [id, rating] : board.ratings) {
        if (auto f1 = latest_f1(board, id)) best = std::max(best, *f1);
      }
    }
  }
  return best;
}

MetaEloEntry meta_elo(const ModelId& model_id, std::span<const LeaderboardState> boards,
                      const MetaConfig& config) {
  auto weighted = contributions(model_id, boards, config);
  MetaEloEntry entry;
  entry.model_id = model_id;
  entry.mode = config.mode;

  double elo_sum = 0.0;
  double f1_sum = 0.0;
  for (const auto& c : weighted.parts) {
    elo_sum += c.weights.w_total * c.elo;
    f1_sum += c.weights.w_total * c.f1;
  }
  if (weighted.weight_sum > 0.0) {
    entry.meta_elo = config.mode == MetaMode::raw_sum ? elo_sum : elo_sum / weighted.weight_sum;
    entry.weighted_f1 = f1_sum / weighted.weight_sum;
  } else if (config.mode == MetaMode::normalized_mean) {
    // Every weight is zero (F1 = 0 everywhere): fall back to the plain mean.
    for (const auto& c : weighted.parts) entry.meta_elo += c.elo;
    entry.meta_elo /= static_cast<double>(weighted.parts.size());
  }
  entry.contributing = std::move(weighted.parts);
  return entry;
}

double weighted_f1_across(const ModelId& model_id, std::span<const LeaderboardState> boards,
                          const MetaConfig& config) {
  return meta_elo(model_id, boards, config).weighted_f1;
}

std::vector<MetaEloEntry> meta_elo_all(std::span<const LeaderboardState> boards, const MetaConfig& config) {
  config.validate();
  std::set<ModelId> ids;
  for (const auto& board : boards) {
    if (board.cycle_count < 1) {
      throw Error(Errc::NoCompletedCycles, "leaderboard '" + board.spec.leaderboard_id + "' has no cycles");
    }
    for (const auto& [id, r] : board.ratings) ids.insert(id);
  }
  if (ids.empty()) throw Error(Errc::NoCompletedCycles, "no rated models in the supplied leaderboards");
  std::vector<MetaEloEntry> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(meta_elo(id, boards, config));
  return out;
}

}  // namespace metaelo
