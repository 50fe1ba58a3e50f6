#include "pgz/error.hpp"

namespace pgz {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::OrderTooLarge: return "OrderTooLarge";
    case ErrorKind::MixedRadicals: return "MixedRadicals";
    case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorKind::PoleAtEvaluationPoint: return "PoleAtEvaluationPoint";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::RatioOne: return "RatioOne";
    case ErrorKind::NotLocallyConstant: return "NotLocallyConstant";
    case ErrorKind::InconsistentCentralCharacter: return "InconsistentCentralCharacter";
    case ErrorKind::NotRepresented: return "NotRepresented";
    case ErrorKind::InvalidCharacter: return "InvalidCharacter";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotImplemented: return "NotImplemented";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BadPlace: return "BadPlace";
    case ErrorKind::UnknownCase: return "UnknownCase";
    case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace pgz
