#pragma once

#include <stdexcept>
#include <string>

namespace patret {

// Every recoverable failure in the library is reported as an Error carrying
// one of these codes. The CLI maps them to exit codes (see tools/).
enum class Errc {
  malformed_row,
  duplicate_id,
  duplicate_key,
  empty_graph,
  exhausted_retries,
  diverged_loss,
  dim_mismatch,
  empty_text,
  missing_embedding,
  zero_vector,
  empty_scores,
  too_few_examples,
  holdout_not_in_universe,
  length_mismatch,
  io_error,
  invalid_argument,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::malformed_row:           return "MalformedRow";
    case Errc::duplicate_id:            return "DuplicateId";
    case Errc::duplicate_key:           return "DuplicateKey";
    case Errc::empty_graph:             return "EmptyGraph";
    case Errc::exhausted_retries:       return "ExhaustedRetries";
    case Errc::diverged_loss:           return "DivergedLoss";
    case Errc::dim_mismatch:            return "DimMismatch";
    case Errc::empty_text:              return "EmptyText";
    case Errc::missing_embedding:       return "MissingEmbedding";
    case Errc::zero_vector:             return "ZeroVector";
    case Errc::empty_scores:            return "EmptyScores";
    case Errc::too_few_examples:        return "TooFewExamples";
    case Errc::holdout_not_in_universe: return "HoldoutNotInUniverse";
    case Errc::length_mismatch:         return "LengthMismatch";
    case Errc::io_error:                return "IoError";
    case Errc::invalid_argument:        return "InvalidArgument";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }
  const char* code_name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace patret
