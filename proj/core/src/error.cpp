#include "texnoise/error.hpp"

namespace texnoise {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument: return "invalid_argument";
    case Errc::kMalformedHeader: return "malformed_header";
    case Errc::kTruncatedPayload: return "truncated_payload";
    case Errc::kUnsupportedMagic: return "unsupported_magic";
    case Errc::kUnsupportedMaxval: return "unsupported_maxval";
    case Errc::kUnsupportedFormat: return "unsupported_format";
    case Errc::kBorderViolation: return "border_violation";
    case Errc::kImageTooSmall: return "image_too_small";
    case Errc::kDegenerateData: return "degenerate_data";
    case Errc::kDimensionMismatch: return "dimension_mismatch";
    case Errc::kLengthMismatch: return "length_mismatch";
    case Errc::kEmptyInput: return "empty_input";
    case Errc::kBadMagic: return "bad_magic";
    case Errc::kBadVersion: return "bad_version";
    case Errc::kNonFiniteValue: return "non_finite_value";
    case Errc::kDuplicatePath: return "duplicate_path";
    case Errc::kCountMismatch: return "count_mismatch";
    case Errc::kMalformedRecord: return "malformed_record";
    case Errc::kEmptyCorpus: return "empty_corpus";
    case Errc::kTooFewSubjects: return "too_few_subjects";
    case Errc::kTooFewImages: return "too_few_images";
    case Errc::kDecodeFailure: return "decode_failure";
    case Errc::kSubjectTooSmall: return "subject_too_small";
    case Errc::kMissingFeatures: return "missing_features";
    case Errc::kInvalidPlan: return "invalid_plan";
    case Errc::kIo: return "io_error";
  }
  return "unknown";
}

}  // namespace texnoise
