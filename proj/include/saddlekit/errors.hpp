#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace saddlekit {

// Base class for every failure raised by the library. Solvers attach the
// iteration index at which a step failed.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}

  std::optional<std::size_t> iteration() const { return iteration_; }
  void set_iteration(std::size_t k) { iteration_ = k; }

 private:
  std::optional<std::size_t> iteration_;
};

#define SADDLEKIT_DEFINE_ERROR(Name)                                 \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

SADDLEKIT_DEFINE_ERROR(DimensionError);
SADDLEKIT_DEFINE_ERROR(NotPositiveDefiniteError);
SADDLEKIT_DEFINE_ERROR(NotSymmetricError);
SADDLEKIT_DEFINE_ERROR(ConvergenceError);
SADDLEKIT_DEFINE_ERROR(SingularMatrixError);
SADDLEKIT_DEFINE_ERROR(NumericalError);
SADDLEKIT_DEFINE_ERROR(PreconditionError);
SADDLEKIT_DEFINE_ERROR(MissingConstantsError);
SADDLEKIT_DEFINE_ERROR(ConfigMismatchError);
SADDLEKIT_DEFINE_ERROR(InsufficientDataError);
SADDLEKIT_DEFINE_ERROR(FormatError);

#undef SADDLEKIT_DEFINE_ERROR

// Raised when the fixed-point inner loop of the implicit proximal step runs out
// of iterations. Carries the last observed increment norm.
class InnerSolveError : public Error {
 public:
  InnerSolveError(const std::string& what, double residual)
      : Error("InnerSolveError: " + what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace saddlekit
