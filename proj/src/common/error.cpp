#include "negbench/common/error.hpp"

namespace negbench {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kEmptyCaption: return "EmptyCaption";
    case Errc::kNoNegatableSite: return "NoNegatableSite";
    case Errc::kUnresolvableCue: return "UnresolvableCue";
    case Errc::kEmptyMatch: return "EmptyMatch";
    case Errc::kDuplicateId: return "DuplicateId";
    case Errc::kEmptyCorpus: return "EmptyCorpus";
    case Errc::kMissingFrames: return "MissingFrames";
    case Errc::kZeroNorm: return "ZeroNorm";
    case Errc::kDimMismatch: return "DimMismatch";
    case Errc::kNoCue: return "NoCue";
    case Errc::kNoGroundTruth: return "NoGroundTruth";
    case Errc::kMissingOrigin: return "MissingOrigin";
    case Errc::kMissingRanking: return "MissingRanking";
    case Errc::kNoNegatives: return "NoNegatives";
    case Errc::kInvalidMargins: return "InvalidMargins";
    case Errc::kNonFiniteLoss: return "NonFiniteLoss";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kParse: return "ParseError";
    case Errc::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace negbench
