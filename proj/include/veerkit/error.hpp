#pragma once

#include <stdexcept>
#include <string>

namespace veerkit {

enum class ErrorKind {
    NonInvolutiveGluing,
    UngluedFace,
    InvalidPermutation,
    SelfGluedFace,
    WrongValence,
    RepeatedTetrahedron,
    NotOrientable,
    Disconnected,
    NonTorusLink,
    MismatchedCuspCount,
    HorizontalOrVerticalSaddle,
    BoundExhausted,
    NonManifoldGluing,
    NotPseudoAnosov,
    InvalidSurface,
    NoConvergence,
    SingularJacobian,
    DegenerateDrift,
    DegenerateShape,
    DegenerateMove,
    VerificationFailed,
    NotCertified,
    BudgetExhausted,
    TransportDegenerate,
    NotNonGeometric,
    ParityViolation,
    NonPositiveGenus,
    InvalidInput,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace veerkit
