#pragma once

#include <stdexcept>
#include <string>

namespace pgz {

enum class ErrorKind {
    DivisionByZero,
    OrderTooLarge,
    MixedRadicals,
    InsufficientPrecision,
    PoleAtEvaluationPoint,
    BudgetExceeded,
    RatioOne,
    NotLocallyConstant,
    InconsistentCentralCharacter,
    NotRepresented,
    InvalidCharacter,
    InvalidInput,
    NotImplemented,
    NoConvergence,
    BadPlace,
    UnknownCase,
    Internal,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(k)) + ": " + what), kind_(k) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& what) { throw Error(k, what); }

}  // namespace pgz
