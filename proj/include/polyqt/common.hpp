#pragma once

#include <stdexcept>
#include <string>

namespace polyqt {

// Machine-readable error codes; the CLI maps these to exit status 1.
enum class Errc {
  DivisionByZero,
  FieldMismatch,
  BothZero,
  GradeBelowDegree,
  SingularMobiusMatrix,
  Unsupported,
  NotSquare,
  NotRegular,
  NotIrreducible,
  NotTriangular,
  DivisorNotStrictlyRegular,
  ShapeMismatch,
  IndexOutOfRange,
  ZeroScale,
  ZeroMatrix,
  UnsupportedFactorization,
  LengthMismatch,
  NotMajorized,
  AverageNotMu,
  EntriesOutOfWindow,
  TargetOutOfRange,
  LayoutMismatch,
  BadPermutation,
  IndexSumViolation,
  TooSmall,
  EqualizationFailed,
  DiagonalBlockNotStrictlyRegular,
  FieldExhausted,
  ConditionNotEstablished,
  HypothesisViolated,
  SchemaError,
  UsageError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::BothZero: return "BothZero";
    case Errc::GradeBelowDegree: return "GradeBelowDegree";
    case Errc::SingularMobiusMatrix: return "SingularMobiusMatrix";
    case Errc::Unsupported: return "Unsupported";
    case Errc::NotSquare: return "NotSquare";
    case Errc::NotRegular: return "NotRegular";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::NotTriangular: return "NotTriangular";
    case Errc::DivisorNotStrictlyRegular: return "DivisorNotStrictlyRegular";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ZeroScale: return "ZeroScale";
    case Errc::ZeroMatrix: return "ZeroMatrix";
    case Errc::UnsupportedFactorization: return "UnsupportedFactorization";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NotMajorized: return "NotMajorized";
    case Errc::AverageNotMu: return "AverageNotMu";
    case Errc::EntriesOutOfWindow: return "EntriesOutOfWindow";
    case Errc::TargetOutOfRange: return "TargetOutOfRange";
    case Errc::LayoutMismatch: return "LayoutMismatch";
    case Errc::BadPermutation: return "BadPermutation";
    case Errc::IndexSumViolation: return "IndexSumViolation";
    case Errc::TooSmall: return "TooSmall";
    case Errc::EqualizationFailed: return "EqualizationFailed";
    case Errc::DiagonalBlockNotStrictlyRegular: return "DiagonalBlockNotStrictlyRegular";
    case Errc::FieldExhausted: return "FieldExhausted";
    case Errc::ConditionNotEstablished: return "ConditionNotEstablished";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::SchemaError: return "SchemaError";
    case Errc::UsageError: return "UsageError";
  }
  return "Unknown";
}

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code(c) {}
};

[[noreturn]] inline void fail(Errc c, const std::string& msg = "") { throw Error(c, msg); }

inline void check(bool ok, Errc c, const std::string& msg = "") {
  if (!ok) fail(c, msg);
}

}  // namespace polyqt
