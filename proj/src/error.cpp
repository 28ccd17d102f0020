#include "lexichron/error.hpp"

namespace lexichron {

const char* err_kind_name(ErrKind kind) {
    switch (kind) {
    case ErrKind::UsageError: return "usage-error";
    case ErrKind::ParseError: return "parse-error";
    case ErrKind::InvalidForm: return "invalid-form";
    case ErrKind::EmptySelection: return "empty-selection";
    case ErrKind::ConfigError: return "config-error";
    case ErrKind::ParameterError: return "parameter-error";
    case ErrKind::MissingSlot: return "missing-slot";
    case ErrKind::ScorerError: return "scorer-error";
    case ErrKind::NoComparableItems: return "no-comparable-items";
    case ErrKind::UndefinedDistance: return "undefined-distance";
    case ErrKind::DomainError: return "domain-error";
    case ErrKind::DomainMismatch: return "domain-mismatch";
    case ErrKind::DivergenceError: return "divergence-error";
    case ErrKind::DegenerateFit: return "degenerate-fit";
    case ErrKind::UndefinedCorrelation: return "undefined-correlation";
    case ErrKind::ProfileIncomplete: return "profile-incomplete";
    case ErrKind::CalibrationImpossible: return "calibration-impossible";
    case ErrKind::EmptyRanking: return "empty-ranking";
    case ErrKind::ComparisonError: return "comparison-error";
    case ErrKind::IoError: return "io-error";
    case ErrKind::InternalError: return "internal-error";
    }
    return "unknown-error";
}

int err_exit_code(ErrKind kind) {
    switch (kind) {
    case ErrKind::UsageError:
        return 1;
    case ErrKind::ParseError:
    case ErrKind::InvalidForm:
        return 2;
    case ErrKind::EmptySelection:
    case ErrKind::ConfigError:
    case ErrKind::ParameterError:
    case ErrKind::ScorerError:
        return 3;
    case ErrKind::MissingSlot:
    case ErrKind::NoComparableItems:
    case ErrKind::UndefinedDistance:
    case ErrKind::DomainError:
    case ErrKind::DomainMismatch:
    case ErrKind::EmptyRanking:
    case ErrKind::ComparisonError:
        return 4;
    case ErrKind::DivergenceError:
    case ErrKind::DegenerateFit:
    case ErrKind::UndefinedCorrelation:
    case ErrKind::ProfileIncomplete:
    case ErrKind::CalibrationImpossible:
        return 5;
    case ErrKind::IoError:
        return 6;
    case ErrKind::InternalError:
        return 7;
    }
    return 7;
}

} // namespace lexichron
