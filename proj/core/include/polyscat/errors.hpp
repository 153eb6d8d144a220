#pragma once

#include <stdexcept>
#include <string>

namespace polyscat {

/// Base of every error raised by the library. `kind()` is a stable
/// identifier used by the command-line tool to pick an exit code.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define POLYSCAT_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}    \
  }

// Arguments outside the mathematical domain of an operation.
POLYSCAT_DEFINE_ERROR(DomainError);
POLYSCAT_DEFINE_ERROR(OrderCapExceeded);
POLYSCAT_DEFINE_ERROR(NumericalOverflow);
// Quadrature / sampling.
POLYSCAT_DEFINE_ERROR(DegreeTooLow);
POLYSCAT_DEFINE_ERROR(RuleMismatch);
POLYSCAT_DEFINE_ERROR(QuadratureFailure);
// Field evaluation.
POLYSCAT_DEFINE_ERROR(InvalidPolarization);
POLYSCAT_DEFINE_ERROR(EvalAtSource);
POLYSCAT_DEFINE_ERROR(EvalInsideBall);
// Spectral guards.
POLYSCAT_DEFINE_ERROR(InteriorEigenvalueNear);
POLYSCAT_DEFINE_ERROR(SingularParameterCombination);
// Forward solver.
POLYSCAT_DEFINE_ERROR(IllConditioned);
POLYSCAT_DEFINE_ERROR(NonConvexInput);
// Files and schemas.
POLYSCAT_DEFINE_ERROR(InputError);

#undef POLYSCAT_DEFINE_ERROR

}  // namespace polyscat
