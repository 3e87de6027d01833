#include "nsmodel/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nsmodel {

Complex sqrt_principal(Complex z) {
  double im = z.imag() == 0.0 ? 0.0 : z.imag();
  return std::sqrt(Complex(z.real(), im));
}

Complex sinc(Complex w) {
  if (std::abs(w) < 1e-4) {
    Complex w2 = w * w;
    return 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
  }
  return std::sin(w) / w;
}

namespace {

void pole_check(double denom_abs, double scale, double eps_pole, const char* name, Complex z) {
  if (denom_abs <= eps_pole * scale) {
    std::ostringstream os;
    os.precision(17);
    os << "denominator " << name << " vanishes near z = " << z.real() << (z.imag() < 0 ? "" : "+")
       << z.imag() << "i (|value| = " << denom_abs << ")";
    throw Error(ErrorKind::PoleProximity, os.str());
  }
}

}  // namespace

Complex weyl_m(const ModelParams& p, Complex z, double eps_pole) {
  Complex k = sqrt_principal(z);
  double r = p.dispersion_rhs();
  Complex c = std::cos(k * p.l);
  Complex d1 = p.eta * p.eta * z - p.gamma;
  Complex d2 = r - c;
  pole_check(std::abs(d1), std::max(p.eta * p.eta * std::abs(z), p.gamma), eps_pole,
             "eta^2 z - gamma", z);
  pole_check(std::abs(d2), std::max({1.0, std::abs(r), std::abs(c)}), eps_pole,
             "Re(e^{i tau l} conj(omega)) - cos(sqrt(z) l)", z);
  // sin(kl)/k written as l*sinc(kl) stays finite at z = 0
  return -p.l * sinc(k * p.l) / (2.0 * d2) - 1.0 / d1;
}

Complex characteristic_s(const ModelParams& p, Complex z, double eps_pole) {
  Complex m = weyl_m(p, z, eps_pole);
  Complex d = kI + m;
  if (std::abs(d) <= eps_pole * std::max(1.0, std::abs(m)))
    throw Error(ErrorKind::DenominatorVanishing, "i + m(z) vanishes");
  return 1.0 - 2.0 * kI / d;
}

Complex cayley_kernel(const ModelParams& p, Complex z, double eps_pole) {
  Complex s = characteristic_s(p, z, eps_pole);
  Complex d = 1.0 + s;
  if (std::abs(d) <= eps_pole) throw Error(ErrorKind::DenominatorVanishing, "1 + s(z) vanishes");
  return 1.0 / d;
}

ChiPair chi(double kappa) { return {(1.0 + kappa) / 2.0, (1.0 - kappa) / 2.0}; }

ThetaPair theta_pair(const ModelParams& p, double kappa, Complex z, double eps_pole) {
  ChiPair x = chi(kappa);
  Complex m = weyl_m(p, z, eps_pole);
  Complex dm = kI - m;
  Complex dp = kI + m;
  double scale = std::max(1.0, std::abs(m));
  if (std::abs(dm) <= eps_pole * scale || std::abs(dp) <= eps_pole * scale)
    throw Error(ErrorKind::DenominatorVanishing, "i -+ m(z) vanishes");

  ThetaPair out;
  out.theta = 1.0 - 2.0 * kI * x.plus / dm;
  out.theta_hat = 1.0 - 2.0 * kI * x.minus / dp;

  Complex s_conj = std::conj(characteristic_s(p, std::conj(z), eps_pole));
  Complex s = characteristic_s(p, z, eps_pole);
  Complex theta_s = 1.0 + (s_conj - 1.0) * x.plus;
  Complex theta_hat_s = 1.0 + (s - 1.0) * x.minus;
  out.consistency_defect =
      std::max(std::abs(out.theta - theta_s), std::abs(out.theta_hat - theta_hat_s));
  return out;
}

}  // namespace nsmodel
