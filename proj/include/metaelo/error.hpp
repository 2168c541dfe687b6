#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace metaelo {

enum class Errc {
  // registry
  DuplicateModelId,
  EmptyId,
  UnknownModel,
  EmptyParticipantSet,
  InvalidRecord,
  // metrics
  LengthMismatch,
  GoldLabelOutsideSet,
  NonBinaryWithBinaryAveraging,
  // elo
  NonFiniteRating,
  OutOfRangeF1,
  FewerThanTwoModels,
  MissingF1,
  InvalidConfig,
  // meta
  ZeroMaxF1,
  UnknownLanguage,
  ModelInNoLeaderboard,
  NoCompletedCycles,
  // data
  MalformedRecord,
  DuplicateItemId,
  EmptyDataset,
  TestSetMismatch,
  ClassTooSmall,
  DegenerateProportions,
  Io,
  // store
  NonContiguousCycle,
  RatingsMismatch,
  CorruptArchive,
  // cli
  Usage,
};

std::string_view errc_name(Errc code) noexcept;

// Integrity failures map to exit status 2, everything else to 1.
bool is_integrity_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::optional<std::size_t> line = std::nullopt);

  Errc code() const noexcept { return code_; }
  // 1-based line number for file-format errors.
  std::optional<std::size_t> line() const noexcept { return line_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
  std::optional<std::size_t> line_;
};

}  // namespace metaelo
