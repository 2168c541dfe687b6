#include "metaelo/registry.hpp"

#include <cmath>

#include "metaelo/error.hpp"

namespace metaelo {

std::string_view to_string(Deployment d) noexcept { return d == Deployment::local ? "local" : "api"; }

std::string_view to_string(License l) noexcept {
  return l == License::open_source ? "open_source" : "closed";
}

std::string_view to_string(RatingStatus s) noexcept {
  return s == RatingStatus::active ? "active" : "inactive";
}

Deployment parse_deployment(std::string_view text) {
  if (text == "local") return Deployment::local;
  if (text == "api") return Deployment::api;
  throw Error(Errc::InvalidRecord, "unknown deployment '" + std::string(text) + "'");
}

License parse_license(std::string_view text) {
  if (text == "open_source" || text == "open") return License::open_source;
  if (text == "closed") return License::closed;
  throw Error(Errc::InvalidRecord, "unknown license '" + std::string(text) + "'");
}

RatingStatus parse_rating_status(std::string_view text) {
  if (text == "active") return RatingStatus::active;
  if (text == "inactive") return RatingStatus::inactive;
  throw Error(Errc::InvalidRecord, "unknown rating status '" + std::string(text) + "'");
}

void ModelRecord::validate() const {
  if (model_id.empty()) throw Error(Errc::EmptyId, "model_id must be non-empty");
  if (params_billions && !(std::isfinite(*params_billions) && *params_billions > 0.0)) {
    throw Error(Errc::InvalidRecord, "params_billions must be positive for '" + model_id + "'");
  }
}

const ModelRecord& ModelRegistry::register_model(ModelRecord descriptor) {
  descriptor.validate();
  if (models_.contains(descriptor.model_id)) {
    throw Error(Errc::DuplicateModelId, "model '" + descriptor.model_id + "' already registered");
  }
  auto id = descriptor.model_id;
  return models_.emplace(std::move(id), std::move(descriptor)).first->second;
}

bool ModelRegistry::contains(std::string_view model_id) const { return models_.find(model_id) != models_.end(); }

const ModelRecord& ModelRegistry::at(std::string_view model_id) const {
  auto it = models_.find(model_id);
  if (it == models_.end()) throw Error(Errc::UnknownModel, "model '" + std::string(model_id) + "' not registered");
  return it->second;
}

ModelRecord& ModelRegistry::at(std::string_view model_id) {
  auto it = models_.find(model_id);
  if (it == models_.end()) throw Error(Errc::UnknownModel, "model '" + std::string(model_id) + "' not registered");
  return it->second;
}

const std::map<std::string, double>& default_language_weights() {
  static const std::map<std::string, double> weights{
      {"en", 1.0}, {"de", 1.1}, {"es", 1.2}, {"zh", 1.3}, {"ru", 1.4}, {"ar", 1.5}, {"hi", 1.7},
  };
  return weights;
}

void LeaderboardSpec::validate() const {
  if (leaderboard_id.empty()) throw Error(Errc::EmptyId, "leaderboard_id must be non-empty");
  if (num_categories < 2) throw Error(Errc::InvalidConfig, "num_categories must be >= 2");
  if (!std::isfinite(language_weight) || language_weight <= 0.0) {
    throw Error(Errc::InvalidConfig, "language_weight must be > 0");
  }
}

Rating enter_model(LeaderboardState& state, const ModelRegistry& registry, const ModelId& model_id,
                   double baseline) {
  registry.at(model_id);
  auto it = state.ratings.find(model_id);
  if (it == state.ratings.end()) {
    it = state.ratings.emplace(model_id, Rating{model_id, baseline, std::nullopt, RatingStatus::active}).first;
  } else {
    it->second.status = RatingStatus::active;
  }
  return it->second;
}

LeaderboardState apply_lifecycle(LeaderboardState state, const ModelRegistry& registry,
                                 const std::set<ModelId>& participating, double baseline) {
  if (participating.size() < 2) {
    throw Error(Errc::EmptyParticipantSet, "a cycle needs at least two participating models");
  }
  for (const auto& id : participating) enter_model(state, registry, id, baseline);
  for (auto& [id, rating] : state.ratings) {
    if (!participating.contains(id)) rating.status = RatingStatus::inactive;
  }
  return state;
}

RatingMap active_ratings(const LeaderboardState& state) {
  RatingMap out;
  for (const auto& [id, rating] : state.ratings) {
    if (rating.status == RatingStatus::active) out.emplace(id, rating.elo);
  }
  return out;
}

}  // namespace metaelo
