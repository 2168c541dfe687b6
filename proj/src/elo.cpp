#include "metaelo/elo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "metaelo/error.hpp"
#include "metaelo/rng.hpp"

namespace metaelo {

namespace {

constexpr double kDecimalGrid = 1e12;

long long on_grid(double x) { return std::llround(x * kDecimalGrid); }

void check_f1(double f1) {
  if (!std::isfinite(f1) || f1 < 0.0 || f1 > 1.0) {
    throw Error(Errc::OutOfRangeF1, "F1 " + std::to_string(f1) + " outside [0, 1]");
  }
}

}  // namespace

std::string_view to_string(UpdateMode mode) noexcept {
  return mode == UpdateMode::sequential ? "sequential" : "batch";
}

UpdateMode parse_update_mode(std::string_view text) {
  if (text == "batch") return UpdateMode::batch;
  if (text == "sequential") return UpdateMode::sequential;
  throw Error(Errc::Usage, "unknown update mode '" + std::string(text) + "'");
}

void EloConfig::validate() const {
  if (!std::isfinite(k_factor) || k_factor <= 0.0) throw Error(Errc::InvalidConfig, "k_factor must be > 0");
  if (!std::isfinite(draw_margin) || draw_margin < 0.0) {
    throw Error(Errc::InvalidConfig, "draw_margin must be >= 0");
  }
  if (!std::isfinite(baseline)) throw Error(Errc::InvalidConfig, "baseline must be finite");
}

ExpectedScores expected_score(double r_a, double r_b) {
  if (!std::isfinite(r_a) || !std::isfinite(r_b)) {
    throw Error(Errc::NonFiniteRating, "ratings must be finite");
  }
  const double e_a = 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / 400.0));
  return {e_a, 1.0 - e_a};
}

double match_outcome(double f1_a, double f1_b, double draw_margin) {
  check_f1(f1_a);
  check_f1(f1_b);
  const long long diff = on_grid(f1_a) - on_grid(f1_b);
  const long long margin = on_grid(draw_margin);
  if (diff > margin) return 1.0;
  if (-diff > margin) return 0.0;
  return 0.5;
}

std::pair<double, double> update_pair(double r_a, double r_b, double s_a, double e_a, double k) {
  return {r_a + k * (s_a - e_a), r_b + k * ((1.0 - s_a) - (1.0 - e_a))};
}

std::vector<std::pair<ModelId, ModelId>> round_robin_pairs(const RatingMap& ratings) {
  std::vector<std::pair<ModelId, ModelId>> pairs;
  for (auto a = ratings.begin(); a != ratings.end(); ++a) {
    for (auto b = std::next(a); b != ratings.end(); ++b) pairs.emplace_back(a->first, b->first);
  }
  return pairs;
}

RatingMap apply_batch(const RatingMap& before, std::span<const MatchResult> matches, double k) {
  // Per-model (opponent, S - E) terms, summed in opponent order.
  std::map<ModelId, std::vector<std::pair<ModelId, double>>> terms;
  for (const auto& m : matches) {
    terms[m.model_a].emplace_back(m.model_b, m.s_a - m.e_a);
    terms[m.model_b].emplace_back(m.model_a, (1.0 - m.s_a) - (1.0 - m.e_a));
  }
  RatingMap after = before;
  for (auto& [id, list] : terms) {
    auto it = after.find(id);
    if (it == after.end()) throw Error(Errc::MissingF1, "match references unrated model '" + id + "'");
    std::sort(list.begin(), list.end());
    double sum = 0.0;
    for (const auto& [opponent, delta] : list) sum += delta;
    it->second += k * sum;
  }
  return after;
}

TournamentResult run_round_robin(const RatingMap& ratings, const ScoreMap& f1s, const EloConfig& config) {
  config.validate();
  if (ratings.size() < 2) {
    throw Error(Errc::FewerThanTwoModels, "a round robin needs at least two models");
  }
  for (const auto& [id, r] : ratings) {
    if (!f1s.contains(id)) throw Error(Errc::MissingF1, "no F1 for model '" + id + "'");
    check_f1(f1s.at(id));
    if (!std::isfinite(r)) throw Error(Errc::NonFiniteRating, "rating of '" + id + "' is not finite");
  }

  auto pairs = round_robin_pairs(ratings);
  TournamentResult out;
  out.matches.reserve(pairs.size());

  if (config.update_mode == UpdateMode::batch) {
    for (const auto& [a, b] : pairs) {
      MatchResult m{a, b, f1s.at(a), f1s.at(b), 0.5, 0.5};
      m.s_a = match_outcome(m.f1_a, m.f1_b, config.draw_margin);
      m.e_a = expected_score(ratings.at(a), ratings.at(b)).a;
      out.matches.push_back(std::move(m));
    }
    out.ratings_after = apply_batch(ratings, out.matches, config.k_factor);
    return out;
  }

  std::mt19937_64 gen(config.rng_seed);
  seeded_shuffle(std::span(pairs), gen);
  RatingMap current = ratings;
  for (const auto& [a, b] : pairs) {
    MatchResult m{a, b, f1s.at(a), f1s.at(b), 0.5, 0.5};
    m.s_a = match_outcome(m.f1_a, m.f1_b, config.draw_margin);
    m.e_a = expected_score(current.at(a), current.at(b)).a;
    auto [ra, rb] = update_pair(current.at(a), current.at(b), m.s_a, m.e_a, config.k_factor);
    current[a] = ra;
    current[b] = rb;
    out.matches.push_back(std::move(m));
  }
  out.ratings_after = std::move(current);
  return out;
}

}  // namespace metaelo
