#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nsmodel {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

enum class ErrorKind {
  InvalidParams,
  PoleProximity,
  DenominatorVanishing,
  MissingDerivativeData,
  DomainViolation,
  SingularNormalisation,
  SpectralPoint,
  ScanResolutionExceeded,
  NotARoot,
  OracleDisagreement,
  AtomCollision,
  IllConditionedFit,
  DegenerateXi,
  ZeroGamma,
  DiscretisationNotConverged,
  EigenFailure,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Parameters (l, eta, gamma, omega, tau) of the prototype operator.
struct ModelParams {
  double l = kPi;
  double eta = 1.0;
  double gamma = 1.0;
  Complex omega{1.0, 0.0};
  double tau = 0.0;

  static ModelParams make(double l, double eta, double gamma, double omega_arg, double tau);

  // Throws InvalidParams when an invariant fails.
  void validate() const;

  // Re(e^{i tau l} conj(omega)), the constant on the right of the dispersion relation.
  double dispersion_rhs() const;
};

}  // namespace nsmodel
