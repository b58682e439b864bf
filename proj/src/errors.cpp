#include "grr/errors.hpp"

namespace grr {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::DegreeMismatch: return "DegreeMismatch";
        case Errc::NonTerminatingRules: return "NonTerminatingRules";
        case Errc::NonConfluentRules: return "NonConfluentRules";
        case Errc::MissingNormalForm: return "MissingNormalForm";
        case Errc::OwnerMismatch: return "OwnerMismatch";
        case Errc::NotNilpotent: return "NotNilpotent";
        case Errc::NotAUnit: return "NotAUnit";
        case Errc::NegativeRank: return "NegativeRank";
        case Errc::RootBoundExceeded: return "RootBoundExceeded";
        case Errc::NonSymmetricResult: return "NonSymmetricResult";
        case Errc::SpaceMismatch: return "SpaceMismatch";
        case Errc::RankOverflow: return "RankOverflow";
        case Errc::MissingGysinData: return "MissingGysinData";
        case Errc::CodimTooSmall: return "CodimTooSmall";
        case Errc::RestrictionMismatch: return "RestrictionMismatch";
        case Errc::IdentityViolation: return "IdentityViolation";
        case Errc::PrincipalityViolation: return "PrincipalityViolation";
        case Errc::PrecisionExhausted: return "PrecisionExhausted";
        case Errc::NonDivisible: return "NonDivisible";
        case Errc::ScenarioUnsupported: return "ScenarioUnsupported";
        case Errc::NotIntegrable: return "NotIntegrable";
        case Errc::ParseError: return "ParseError";
        case Errc::NameError: return "NameError";
        case Errc::TypeError: return "TypeError";
    }
    return "UnknownError";
}

}  // namespace grr
