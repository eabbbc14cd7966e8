#include "retriever/error.hpp"

namespace retriever {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kFormat: return "format_error";
    case ErrorCode::kDuplicateEntry: return "duplicate_entry";
    case ErrorCode::kUnknownCountry: return "unknown_country";
    case ErrorCode::kManifestEmpty: return "manifest_empty";
    case ErrorCode::kNoHeadings: return "no_headings";
    case ErrorCode::kIngest: return "ingest_error";
    case ErrorCode::kDuplicateWord: return "duplicate_word";
    case ErrorCode::kDimension: return "dimension_mismatch";
    case ErrorCode::kDuplicateDoc: return "duplicate_doc";
    case ErrorCode::kEmptyCorpus: return "empty_corpus";
    case ErrorCode::kUnknownDoc: return "unknown_doc";
    case ErrorCode::kRankMismatch: return "rank_mismatch";
    case ErrorCode::kEmptyQuery: return "empty_query";
    case ErrorCode::kEmptyEval: return "empty_eval";
    case ErrorCode::kNoIndex: return "no_index";
    case ErrorCode::kBusy: return "reindex_in_progress";
    case ErrorCode::kInternal: return "internal_error";
  }
  return "unknown";
}

}  // namespace retriever
