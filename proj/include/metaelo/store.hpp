#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "metaelo/registry.hpp"

namespace metaelo {

inline constexpr int kArchiveFormatVersion = 1;
// Ratings and metrics are rendered at 6 decimals; replay compares at this slack.
inline constexpr double kReplayTolerance = 1e-6;

// One leaderboard's full record: spec, catalog snapshot, ratings, and every cycle.
struct LeaderboardArchive {
  int format_version = kArchiveFormatVersion;
  LeaderboardState state;
  std::map<ModelId, ModelRecord> catalog;
  // The fixed test set of the most recent cycle (or the one set for cycle 1).
  std::string test_set_id;
  // Fields this version does not know about, kept for round-tripping.
  nlohmann::json extra = nlohmann::json::object();
  std::vector<nlohmann::json> cycle_extra;
};

LeaderboardArchive new_archive(LeaderboardSpec spec);

/// Appends the next cycle.
///
/// The cycle must be numbered cycle_count + 1 and start from the archive's
/// ratings (or the baseline, for newcomers). Participants take their
/// ratings_after; everyone else is carried over as inactive.
LeaderboardArchive append_cycle(LeaderboardArchive archive, const CycleResult& cycle);

struct ReplayVerdict {
  bool ok = true;
  // Cycle of the first divergence; 0 when the final ratings map diverges.
  std::optional<int> cycle;
  std::string detail;
};

// Recomputes every cycle from its inputs. Structural damage throws CorruptArchive.
ReplayVerdict replay_verify(const LeaderboardArchive& archive);

std::string serialize_archive(const LeaderboardArchive& archive);
LeaderboardArchive parse_archive(std::string_view document);

LeaderboardArchive load_archive(const std::filesystem::path& path);
void save_archive(const std::filesystem::path& path, const LeaderboardArchive& archive);

nlohmann::json metric_set_to_json(const MetricSet& m);
MetricSet metric_set_from_json(const nlohmann::json& j);

}  // namespace metaelo
