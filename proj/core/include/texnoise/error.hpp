#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace texnoise {

/// Error categories surfaced by every module. The CLI prints `to_string(code)`
/// as the machine-readable part of its error line.
enum class Errc {
  kInvalidArgument,
  // imaging
  kMalformedHeader,
  kTruncatedPayload,
  kUnsupportedMagic,
  kUnsupportedMaxval,
  kUnsupportedFormat,
  // descriptors
  kBorderViolation,
  kImageTooSmall,
  // classifiers
  kDegenerateData,
  kDimensionMismatch,
  kLengthMismatch,
  kEmptyInput,
  // featurestore
  kBadMagic,
  kBadVersion,
  kNonFiniteValue,
  kDuplicatePath,
  kCountMismatch,
  kMalformedRecord,
  // harness
  kEmptyCorpus,
  kTooFewSubjects,
  kTooFewImages,
  kDecodeFailure,
  kSubjectTooSmall,
  kMissingFeatures,
  kInvalidPlan,
  kIo,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message) : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace texnoise
