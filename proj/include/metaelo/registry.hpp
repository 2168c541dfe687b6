#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "metaelo/elo.hpp"

namespace metaelo {

enum class Deployment { local, api };
enum class License { open_source, closed };
enum class RatingStatus { active, inactive };

std::string_view to_string(Deployment d) noexcept;
std::string_view to_string(License l) noexcept;
std::string_view to_string(RatingStatus s) noexcept;
Deployment parse_deployment(std::string_view text);
License parse_license(std::string_view text);
RatingStatus parse_rating_status(std::string_view text);

struct ModelRecord {
  ModelId model_id;
  std::string display_name;
  std::optional<double> params_billions;
  Deployment deployment = Deployment::api;
  License license = License::closed;
  std::optional<std::string> family;
  bool active = true;

  void validate() const;

  friend bool operator==(const ModelRecord&, const ModelRecord&) = default;
};

// Catalog of every model known to the engine. Ratings live per leaderboard.
class ModelRegistry {
 public:
  const ModelRecord& register_model(ModelRecord descriptor);
  bool contains(std::string_view model_id) const;
  const ModelRecord& at(std::string_view model_id) const;
  ModelRecord& at(std::string_view model_id);
  const std::map<ModelId, ModelRecord, std::less<>>& models() const noexcept { return models_; }

 private:
  std::map<ModelId, ModelRecord, std::less<>> models_;
};

// Default language weights; English is the 1.0 baseline.
const std::map<std::string, double>& default_language_weights();

struct LeaderboardSpec {
  std::string leaderboard_id;
  std::string task_name;
  std::string language_code;
  int num_categories = 2;
  double language_weight = 1.0;

  void validate() const;

  friend bool operator==(const LeaderboardSpec&, const LeaderboardSpec&) = default;
};

struct Rating {
  ModelId model_id;
  double elo = 1500.0;
  std::optional<int> last_active_cycle;
  RatingStatus status = RatingStatus::active;

  friend bool operator==(const Rating&, const Rating&) = default;
};

struct LeaderboardState {
  LeaderboardSpec spec;
  std::map<ModelId, Rating> ratings;
  int cycle_count = 0;
  std::vector<CycleResult> history;
};

// Enters a model at `baseline`, or reactivates it at its last known elo.
Rating enter_model(LeaderboardState& state, const ModelRegistry& registry, const ModelId& model_id,
                   double baseline = 1500.0);

/// Start-of-cycle lifecycle step.
///
/// Participants become active (newcomers enter at `baseline`); rated models
/// that sit the cycle out are marked inactive with their elo untouched.
LeaderboardState apply_lifecycle(LeaderboardState state, const ModelRegistry& registry,
                                 const std::set<ModelId>& participating, double baseline = 1500.0);

// Elo of every active model; the input to the cycle's round robin.
RatingMap active_ratings(const LeaderboardState& state);

}  // namespace metaelo
