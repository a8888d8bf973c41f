#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ddnnf {

enum class Errc {
  EmptyInput,
  MalformedHeader,
  MalformedLine,
  MissingSentinel,
  IndexOutOfRange,
  UnknownNodeIndex,
  LiteralOutOfRange,
  EmptyCircuit,
  CycleDetected,
  AmbiguousRoot,
  MultipleRoots,
  DecomposabilityViolation,
  NotSmooth,
  VariableOutOfRange,
  ZeroOldChild,
  OracleLimitExceeded,
  PartialAssignment,
  VoidCircuit,
};

inline std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::EmptyInput: return "empty input";
    case Errc::MalformedHeader: return "malformed header";
    case Errc::MalformedLine: return "malformed line";
    case Errc::MissingSentinel: return "missing terminating 0";
    case Errc::IndexOutOfRange: return "node index out of range";
    case Errc::UnknownNodeIndex: return "unknown node index";
    case Errc::LiteralOutOfRange: return "literal out of range";
    case Errc::EmptyCircuit: return "empty circuit";
    case Errc::CycleDetected: return "cycle detected";
    case Errc::AmbiguousRoot: return "ambiguous root";
    case Errc::MultipleRoots: return "multiple roots";
    case Errc::DecomposabilityViolation: return "decomposability violation";
    case Errc::NotSmooth: return "circuit is not smooth";
    case Errc::VariableOutOfRange: return "variable out of range";
    case Errc::ZeroOldChild: return "zero-valued old child";
    case Errc::OracleLimitExceeded: return "oracle variable limit exceeded";
    case Errc::PartialAssignment: return "partial assignment";
    case Errc::VoidCircuit: return "void circuit";
  }
  return "unknown error";
}

// All library failures surface as this exception. `line` is the 1-based
// input line for parse errors and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string detail, std::size_t line = 0)
      : std::runtime_error(format(code, detail, line)), code_(code), line_(line) {}

  Errc code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(Errc code, const std::string& detail, std::size_t line) {
    std::string msg;
    if (line != 0) msg = "line " + std::to_string(line) + ": ";
    msg += errc_name(code);
    if (!detail.empty()) msg += ": " + detail;
    return msg;
  }

  Errc code_;
  std::size_t line_;
};

}  // namespace ddnnf
