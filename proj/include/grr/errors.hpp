#pragma once

#include <stdexcept>
#include <string>

namespace grr {

enum class Errc {
    DegreeMismatch,
    NonTerminatingRules,
    NonConfluentRules,
    MissingNormalForm,
    OwnerMismatch,
    NotNilpotent,
    NotAUnit,
    NegativeRank,
    RootBoundExceeded,
    NonSymmetricResult,
    SpaceMismatch,
    RankOverflow,
    MissingGysinData,
    CodimTooSmall,
    RestrictionMismatch,
    IdentityViolation,
    PrincipalityViolation,
    PrecisionExhausted,
    NonDivisible,
    ScenarioUnsupported,
    NotIntegrable,
    ParseError,
    NameError,
    TypeError,
};

const char* errc_name(Errc c);

// Single exception type for every engine error; `code` keeps failures
// machine-checkable in tests and lets the CLI map them to exit codes.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace grr
