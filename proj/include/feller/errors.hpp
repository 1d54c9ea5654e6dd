#pragma once

#include <stdexcept>
#include <string>

namespace feller {

enum class Errc {
  NonPositiveWeight,
  NonPositiveMeasure,
  SelfLoop,
  ConflictingDuplicateEdge,
  Disconnected,
  UnknownVertex,
  DuplicateVertex,
  RadiusExceedsTruncation,
  MissingValue,
  FrontierContamination,
  EmptyInterior,
  UnsupportedVertexInU0,
  NegativeU0,
  VertexOutsideFirstRegion,
  MonotonicityViolation,
  OmegaNotInsideRegion,
  SolverBreakdown,
  NotConvergedAtTruncation,
  InsufficientAnnuli,
  ConditionViolated,
  StochasticCompletenessNotEstablished,
  NonPositiveEntry,
  LengthTooShort,
  InconclusiveSeries,
  TooFewTerms,
  WrongTwistKind,
  ModelNotClassified,
  ParseError,
  NotAModel,
  UnknownCriterion,
  UnknownExample,
  BadParams,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace feller
