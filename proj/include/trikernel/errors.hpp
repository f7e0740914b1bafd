#ifndef TRIKERNEL_ERRORS_HPP
#define TRIKERNEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace trikernel {

// Base class for all library errors. `code` is a stable machine-readable
// identifier; the CLI maps it into error JSON and exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define TRIKERNEL_DEFINE_ERROR(Name)                              \
    class Name : public Error {                                   \
    public:                                                       \
        explicit Name(const std::string& message)                 \
            : Error(#Name, message) {}                            \
    }

TRIKERNEL_DEFINE_ERROR(DegenerateModel);
TRIKERNEL_DEFINE_ERROR(StartOutsideDomain);
TRIKERNEL_DEFINE_ERROR(HypothesisViolated);
TRIKERNEL_DEFINE_ERROR(DivisionByZeroSeries);
TRIKERNEL_DEFINE_ERROR(NonSquareLeading);
TRIKERNEL_DEFINE_ERROR(NoConvergence);
TRIKERNEL_DEFINE_ERROR(StepsTooLarge);
TRIKERNEL_DEFINE_ERROR(ClassificationFailure);
TRIKERNEL_DEFINE_ERROR(UnboundedContour);
TRIKERNEL_DEFINE_ERROR(OnCurve);
TRIKERNEL_DEFINE_ERROR(PhaseJumpTooLarge);
TRIKERNEL_DEFINE_ERROR(EvaluationAtPole);
TRIKERNEL_DEFINE_ERROR(PoleAlreadyAtY2);
TRIKERNEL_DEFINE_ERROR(QuadratureNotConverged);
TRIKERNEL_DEFINE_ERROR(InversionOutsideFundamentalDomain);
TRIKERNEL_DEFINE_ERROR(BranchPointImageInfinite);
TRIKERNEL_DEFINE_ERROR(TruncationTailTooLarge);
TRIKERNEL_DEFINE_ERROR(PointTooCloseToContour);
TRIKERNEL_DEFINE_ERROR(IndexMismatch);
TRIKERNEL_DEFINE_ERROR(BranchDiscontinuity);
TRIKERNEL_DEFINE_ERROR(TruncationInsufficient);
TRIKERNEL_DEFINE_ERROR(KernelZero);
TRIKERNEL_DEFINE_ERROR(ConvergenceDomainViolated);
TRIKERNEL_DEFINE_ERROR(InvalidArgument);

#undef TRIKERNEL_DEFINE_ERROR

} // namespace trikernel

#endif
