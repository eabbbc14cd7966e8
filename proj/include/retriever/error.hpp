#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace retriever {

/// Every failure the library reports carries one of these codes. The numeric
/// values are part of the C API (see retriever.h) and must not be reordered.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kFormat = 4,
  kDuplicateEntry = 5,
  kUnknownCountry = 6,
  kManifestEmpty = 7,
  kNoHeadings = 8,
  kIngest = 9,
  kDuplicateWord = 10,
  kDimension = 11,
  kDuplicateDoc = 12,
  kEmptyCorpus = 13,
  kUnknownDoc = 14,
  kRankMismatch = 15,
  kEmptyQuery = 16,
  kEmptyEval = 17,
  kNoIndex = 18,
  kBusy = 19,
  kInternal = 20,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace retriever
