#pragma once

#include <stdexcept>
#include <string>

namespace skf {

// Root of every failure raised by the library. Subclasses name the failure
// mode so callers can catch selectively.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define SKF_DECLARE_ERROR(Name)                 \
    class Name : public Error {                 \
    public:                                     \
        explicit Name(const std::string& what)  \
            : Error(#Name ": " + what) {}       \
    }

SKF_DECLARE_ERROR(InvalidArgument);
SKF_DECLARE_ERROR(DegenerateModuli);
SKF_DECLARE_ERROR(BranchAmbiguity);
SKF_DECLARE_ERROR(PoleAtEnd);
SKF_DECLARE_ERROR(PoleOnPath);
SKF_DECLARE_ERROR(BetaDegenerate);
SKF_DECLARE_ERROR(SymmetryViolation);
SKF_DECLARE_ERROR(CoefficientPole);
SKF_DECLARE_ERROR(StepFailure);
SKF_DECLARE_ERROR(NoBracket);
SKF_DECLARE_ERROR(NewtonDivergence);
SKF_DECLARE_ERROR(InsufficientTail);
SKF_DECLARE_ERROR(IoError);

#undef SKF_DECLARE_ERROR

}  // namespace skf
