#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace negbench {

enum class Errc {
  kEmptyCaption,
  kNoNegatableSite,
  kUnresolvableCue,
  kEmptyMatch,
  kDuplicateId,
  kEmptyCorpus,
  kMissingFrames,
  kZeroNorm,
  kDimMismatch,
  kNoCue,
  kNoGroundTruth,
  kMissingOrigin,
  kMissingRanking,
  kNoNegatives,
  kInvalidMargins,
  kNonFiniteLoss,
  kInvalidArgument,
  kParse,
  kIo,
};

std::string_view errc_name(Errc code);

// Exception type for every failure the toolkit reports. The code is the
// machine-checkable part; the message carries context for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

  // Input errors map to CLI exit code 1; everything else is internal.
  bool is_input_error() const noexcept {
    return code_ != Errc::kNonFiniteLoss;
  }

 private:
  Errc code_;
};

}  // namespace negbench
