#include "metaelo/error.hpp"

namespace metaelo {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::DuplicateModelId: return "DuplicateModelId";
    case Errc::EmptyId: return "EmptyId";
    case Errc::UnknownModel: return "UnknownModel";
    case Errc::EmptyParticipantSet: return "EmptyParticipantSet";
    case Errc::InvalidRecord: return "InvalidRecord";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::GoldLabelOutsideSet: return "GoldLabelOutsideSet";
    case Errc::NonBinaryWithBinaryAveraging: return "NonBinaryWithBinaryAveraging";
    case Errc::NonFiniteRating: return "NonFiniteRating";
    case Errc::OutOfRangeF1: return "OutOfRangeF1";
    case Errc::FewerThanTwoModels: return "FewerThanTwoModels";
    case Errc::MissingF1: return "MissingF1";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ZeroMaxF1: return "ZeroMaxF1";
    case Errc::UnknownLanguage: return "UnknownLanguage";
    case Errc::ModelInNoLeaderboard: return "ModelInNoLeaderboard";
    case Errc::NoCompletedCycles: return "NoCompletedCycles";
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::DuplicateItemId: return "DuplicateItemId";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::TestSetMismatch: return "TestSetMismatch";
    case Errc::ClassTooSmall: return "ClassTooSmall";
    case Errc::DegenerateProportions: return "DegenerateProportions";
    case Errc::Io: return "Io";
    case Errc::NonContiguousCycle: return "NonContiguousCycle";
    case Errc::RatingsMismatch: return "RatingsMismatch";
    case Errc::CorruptArchive: return "CorruptArchive";
    case Errc::Usage: return "Usage";
  }
  return "Unknown";
}

bool is_integrity_error(Errc code) noexcept {
  return code == Errc::NonContiguousCycle || code == Errc::RatingsMismatch ||
         code == Errc::CorruptArchive;
}

Error::Error(Errc code, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code),
      detail_(message),
      line_(line) {}

}  // namespace metaelo
