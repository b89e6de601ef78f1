#pragma once

#include <stdexcept>
#include <string>

namespace spectra {

// Exit-code families used by the CLI: 2 input, 3 convergence, 4 undetermined.
enum class ErrorKind { Input = 2, Convergence = 3, Undetermined = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& what)
        : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}
    ErrorKind kind() const noexcept { return kind_; }
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

#define SPECTRA_ERROR(NAME, KIND)                                            \
    class NAME : public Error {                                              \
    public:                                                                  \
        explicit NAME(const std::string& what)                               \
            : Error(ErrorKind::KIND, #NAME, what) {}                         \
    };

SPECTRA_ERROR(ParseError, Input)
SPECTRA_ERROR(NotMonic, Input)
SPECTRA_ERROR(BadConstantTerm, Input)
SPECTRA_ERROR(NotIrreducible, Input)
SPECTRA_ERROR(NoRootInRange, Input)
SPECTRA_ERROR(NonHyperbolic, Input)
SPECTRA_ERROR(NotPisot, Input)
SPECTRA_ERROR(IntegerOverflow, Input)
SPECTRA_ERROR(PatchTooLarge, Input)
SPECTRA_ERROR(DepthTooLarge, Input)
SPECTRA_ERROR(TooLarge, Input)
SPECTRA_ERROR(BoundaryAmbiguous, Undetermined)
SPECTRA_ERROR(ConvergenceFailure, Convergence)
SPECTRA_ERROR(AssumptionViolated, Convergence)
SPECTRA_ERROR(SearchExhausted, Convergence)
SPECTRA_ERROR(NoContraction, Convergence)
SPECTRA_ERROR(ZeroMass, Input)
SPECTRA_ERROR(NullWordNotFound, Convergence)
SPECTRA_ERROR(WindowEscape, Convergence)
SPECTRA_ERROR(OutOfWindow, Input)

#undef SPECTRA_ERROR

}  // namespace spectra
