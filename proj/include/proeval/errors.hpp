#pragma once

#include <stdexcept>
#include <string>

namespace proeval {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define PROEVAL_DEFINE_ERROR(Name)                                \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(what) {}       \
  }

// gateway
PROEVAL_DEFINE_ERROR(CredentialMissing);
PROEVAL_DEFINE_ERROR(TransportFailure);
PROEVAL_DEFINE_ERROR(ScriptExhausted);
PROEVAL_DEFINE_ERROR(NoJsonFound);
PROEVAL_DEFINE_ERROR(MalformedJson);

// topic tree
PROEVAL_DEFINE_ERROR(TooDeep);
PROEVAL_DEFINE_ERROR(InvariantViolation);

// environment & target generation
PROEVAL_DEFINE_ERROR(EmptyField);
PROEVAL_DEFINE_ERROR(CandidateShortfall);

// refinement
PROEVAL_DEFINE_ERROR(MalformedJudgment);
PROEVAL_DEFINE_ERROR(NoChange);
PROEVAL_DEFINE_ERROR(MissingOutputPrefix);
PROEVAL_DEFINE_ERROR(OriginalDropped);

// evaluation
PROEVAL_DEFINE_ERROR(UnparseablePlan);
PROEVAL_DEFINE_ERROR(ScoreOutOfRange);
PROEVAL_DEFINE_ERROR(EmptyReply);

// metrics
PROEVAL_DEFINE_ERROR(LengthMismatch);
PROEVAL_DEFINE_ERROR(DegenerateMarginals);
PROEVAL_DEFINE_ERROR(EmptyInput);

// configuration / orchestration
PROEVAL_DEFINE_ERROR(ConfigError);
PROEVAL_DEFINE_ERROR(UsageError);

#undef PROEVAL_DEFINE_ERROR

}  // namespace proeval
