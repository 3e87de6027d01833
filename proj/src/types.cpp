#include "nsmodel/types.hpp"

#include <cmath>

namespace nsmodel {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::DenominatorVanishing: return "DenominatorVanishing";
    case ErrorKind::MissingDerivativeData: return "MissingDerivativeData";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::SingularNormalisation: return "SingularNormalisation";
    case ErrorKind::SpectralPoint: return "SpectralPoint";
    case ErrorKind::ScanResolutionExceeded: return "ScanResolutionExceeded";
    case ErrorKind::NotARoot: return "NotARoot";
    case ErrorKind::OracleDisagreement: return "OracleDisagreement";
    case ErrorKind::AtomCollision: return "AtomCollision";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
    case ErrorKind::DegenerateXi: return "DegenerateXi";
    case ErrorKind::ZeroGamma: return "ZeroGamma";
    case ErrorKind::DiscretisationNotConverged: return "DiscretisationNotConverged";
    case ErrorKind::EigenFailure: return "EigenFailure";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

ModelParams ModelParams::make(double l, double eta, double gamma, double omega_arg, double tau) {
  ModelParams p;
  p.l = l;
  p.eta = eta;
  p.gamma = gamma;
  p.omega = std::polar(1.0, omega_arg);
  p.tau = tau;
  p.validate();
  return p;
}

void ModelParams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(l) || !finite(eta) || !finite(gamma) || !finite(tau) || !finite(omega.real()) ||
      !finite(omega.imag()))
    throw Error(ErrorKind::InvalidParams, "non-finite parameter");
  if (!(l > 0.0)) throw Error(ErrorKind::InvalidParams, "l must be positive");
  if (eta == 0.0) throw Error(ErrorKind::InvalidParams, "eta must be nonzero");
  if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidParams, "gamma must be positive");
  if (std::abs(std::abs(omega) - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidParams, "omega must be unimodular");
  if (tau < -kPi || tau >= kPi) throw Error(ErrorKind::InvalidParams, "tau must lie in [-pi, pi)");
}

double ModelParams::dispersion_rhs() const {
  return std::real(std::polar(1.0, tau * l) * std::conj(omega));
}

}  // namespace nsmodel
