#pragma once

#include <stdexcept>
#include <string>

namespace lexichron {

// Every failure mode the toolkit reports. Each kind belongs to one exit
// category so the CLI can map errors to stable process exit codes.
enum class ErrKind {
    UsageError,            // bad command line
    ParseError,            // malformed input row / bad UTF-8
    InvalidForm,           // empty or whitespace-only word form
    EmptySelection,        // subset filter matched nothing
    ConfigError,           // missing proto language, mismatched sizes, ...
    ParameterError,        // out-of-range numeric parameter
    MissingSlot,           // similarity asked on an absent slot
    ScorerError,           // binary scorer without cognate classes
    NoComparableItems,     // language pair shares no filled items
    UndefinedDistance,     // NLD on two empty sequences
    DomainError,           // argument outside the mathematical domain
    DomainMismatch,        // rankings over different item sets
    DivergenceError,       // overlap at or below the reachable infimum
    DegenerateFit,         // zero variance / zero denominator in a fit
    UndefinedCorrelation,  // correlation of a constant sequence
    ProfileIncomplete,     // rate profile with undefined entries
    CalibrationImpossible, // anchor pair with overlap 1 at positive time
    EmptyRanking,          // ranking an empty table
    ComparisonError,       // family comparison lacks items or languages
    IoError,               // filesystem failure
    InternalError,         // broken invariant caught at runtime
};

const char* err_kind_name(ErrKind kind);

// Process exit code for a kind; documented in the CLI --help text.
int err_exit_code(ErrKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrKind kind() const { return kind_; }
    const char* kind_name() const { return err_kind_name(kind_); }
    int exit_code() const { return err_exit_code(kind_); }

  private:
    ErrKind kind_;
};

[[noreturn]] inline void raise(ErrKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace lexichron
