#pragma once

#include <stdexcept>
#include <string>

namespace hhg {

/* Error taxonomy shared by every module.  Each error carries a stable
 * machine-readable code (used by the CLI to pick exit codes and by the
 * structured report writer) plus a human-readable message. */
class EngineError : public std::runtime_error {
public:
  EngineError(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

#define HHG_DEFINE_ERROR(NAME)                                        \
  class NAME : public EngineError {                                   \
  public:                                                             \
    explicit NAME(const std::string& msg) : EngineError(#NAME, msg) {} \
  };

HHG_DEFINE_ERROR(FieldMismatch)      // operands over different fields
HHG_DEFINE_ERROR(ShapeError)         // dimension / window mismatch
HHG_DEFINE_ERROR(TruncationError)    // honest answer needs degrees outside the window
HHG_DEFINE_ERROR(AxiomError)         // structure axiom violated at construction
HHG_DEFINE_ERROR(NonConnectedError)  // connectivity gate (bar, tensor algebra)
HHG_DEFINE_ERROR(NonSimplyConnected) // simple-connectivity gate (cobar)
HHG_DEFINE_ERROR(OddDegreeError)     // exterior generators must sit in odd degrees
HHG_DEFINE_ERROR(WitnessError)       // supplied witness fails its checklist
HHG_DEFINE_ERROR(BaseMismatch)       // modules/corings over different base algebras
HHG_DEFINE_ERROR(WindowTooSmall)     // requested range exceeds trusted range
HHG_DEFINE_ERROR(NotRelativeHopf)    // coring comparison map fails to invert
HHG_DEFINE_ERROR(UnsupportedGamma)   // no engine-supported comparison for this Γ
HHG_DEFINE_ERROR(IncompleteEvidence) // verdict needs a witness the problem lacks
HHG_DEFINE_ERROR(ParseError)         // malformed document

#undef HHG_DEFINE_ERROR

}  // namespace hhg
