#include <random>

#include "doctest.h"
#include "nsmodel/herglotz.hpp"

using namespace nsmodel;

namespace {

ModelParams base() { return ModelParams::make(kPi, 1.0, 2.0, 0.0, 0.0); }

// M-function from a cos/sin fundamental system, written independently of the library formula.
Complex m_oracle(const ModelParams& p, Complex z) {
  Complex k = std::sqrt(z);
  Complex ph = std::exp(Complex(0.0, -p.tau * p.l));
  Complex b = (std::conj(p.omega) * std::conj(ph) - std::cos(k * p.l)) / std::sin(k * p.l);
  Complex du = k * b - p.omega * ph * (-k * std::sin(k * p.l) + k * b * std::cos(k * p.l));
  Complex beta = p.eta * du / (p.gamma - p.eta * p.eta * z);
  return (beta / p.eta - 1.0) / du;
}

// same closed form with the opposite square-root branch
Complex m_other_branch(const ModelParams& p, Complex z) {
  Complex k = -sqrt_principal(z);
  return -std::sin(k * p.l) / (2.0 * k * (p.dispersion_rhs() - std::cos(k * p.l))) -
         1.0 / (p.eta * p.eta * z - p.gamma);
}

ModelParams random_params(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return ModelParams::make(0.5 + 3.0 * u(gen), (u(gen) < 0.5 ? -1.0 : 1.0) * (0.3 + 2.0 * u(gen)),
                           0.1 + 3.0 * u(gen), 2.0 * kPi * u(gen), -kPi + 2.0 * kPi * u(gen) * 0.999);
}

}  // namespace

TEST_CASE("principal square root") {
  CHECK(std::abs(sqrt_principal(4.0) - Complex(2.0)) < 1e-15);
  CHECK(std::abs(sqrt_principal(-1.0) - kI) < 1e-15);
  CHECK(std::abs(sqrt_principal(Complex(-1.0, -0.0)) - kI) < 1e-15);
  CHECK(std::abs(sqrt_principal(Complex(0.0, 2.0)) - Complex(1.0, 1.0)) < 1e-15);
  Complex r = sqrt_principal(Complex(-3.0, 1e-3));
  CHECK(r.real() >= 0.0);
}

TEST_CASE("weyl_m reference values") {
  ModelParams p = base();
  CHECK(std::abs(weyl_m(p, 1.0) - Complex(1.0)) < 1e-14);
  CHECK(weyl_m(p, Complex(1.0, 0.5)).imag() > 0.0);
  Complex z(1.3, 0.7);
  CHECK(std::abs(weyl_m(p, std::conj(z)) - std::conj(weyl_m(p, z))) < 1e-14);
}

TEST_CASE("weyl_m matches an independent fundamental-system computation") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    ModelParams p = random_params(gen);
    Complex z(10.0 * u(gen), 5.0 * u(gen));
    if (std::abs(z.imag()) < 1e-3) continue;
    Complex m = weyl_m(p, z);
    CHECK(std::abs(m - m_oracle(p, z)) < 1e-11 * std::max(1.0, std::abs(m)));
    CHECK(std::abs(m - m_other_branch(p, z)) < 1e-11 * std::max(1.0, std::abs(m)));
  }
}

TEST_CASE("Herglotz sign and conjugate symmetry on a grid") {
  std::mt19937_64 gen(11);
  for (int n = 0; n < 20; ++n) {
    ModelParams p = random_params(gen);
    for (double x = -20.0; x <= 60.0; x += 3.7)
      for (double y : {-3.0, -0.2, -1e-3, 1e-3, 0.2, 3.0}) {
        Complex z(x, y);
        Complex m = weyl_m(p, z);
        CHECK(m.imag() * y > 0.0);
        CHECK(std::abs(weyl_m(p, std::conj(z)) - std::conj(m)) <= 1e-12 * std::abs(m));
      }
  }
}

TEST_CASE("pole proximity is reported") {
  ModelParams p = base();
  CHECK_THROWS_AS(weyl_m(p, 2.0), Error);  // eta^2 z = gamma
  try {
    weyl_m(p, 2.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleProximity);
    CHECK(std::string(e.what()).find("eta^2 z - gamma") != std::string::npos);
  }
  // Re(e^{i tau l} conj(omega)) = cos(sqrt(z) l) at z = 4 for l = pi, omega = 1
  try {
    weyl_m(p, 4.0);
    FAIL("expected PoleProximity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleProximity);
  }
}

TEST_CASE("characteristic function") {
  ModelParams p = base();
  Complex s1 = characteristic_s(p, 1.0);
  CHECK(std::abs(s1 - Complex(0.0, -1.0)) < 1e-14);
  CHECK(std::abs(std::abs(s1) - 1.0) < 1e-14);
  CHECK(std::abs(characteristic_s(p, Complex(2.0, 1.0))) < 1.0);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 1000; ++n) {
    Complex z(-30.0 + 100.0 * u(gen), 1e-4 + 10.0 * u(gen));
    Complex s = characteristic_s(p, z);
    CHECK(std::abs(s) <= 1.0 + 1e-12);
    Complex lhs = cayley_kernel(p, z);
    Complex rhs = 0.5 + kI / (2.0 * weyl_m(p, z));
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
  }
  // unimodular on the real axis away from poles
  for (double x = 0.05; x < 80.0; x += 0.137) {
    try {
      CHECK(std::abs(std::abs(characteristic_s(p, x)) - 1.0) < 1e-10);
    } catch (const Error&) {
    }
  }
}

TEST_CASE("s = -1 where m vanishes") {
  ModelParams p = ModelParams::make(kPi, 1.0, 1.0, kPi / 3.0, 0.0);
  // zeros of m are roots of cos(kl) - (lambda - gamma) sin(kl)/(2k) - Re(conj omega)
  auto f = [&](double lam) {
    double k = std::sqrt(lam);
    return std::cos(k * kPi) - (lam - 1.0) * std::sin(k * kPi) / (2.0 * k) - 0.5;
  };
  double a = 0.01, b = 0.02;
  while (f(a) * f(b) > 0.0) {
    a = b;
    b += 0.01;
  }
  for (int i = 0; i < 200; ++i) {
    double c = 0.5 * (a + b);
    if ((f(c) < 0) == (f(a) < 0))
      a = c;
    else
      b = c;
  }
  CHECK(std::abs(weyl_m(p, a)) < 1e-10);
  CHECK(std::abs(characteristic_s(p, a) + 1.0) < 1e-9);
}

TEST_CASE("chi") {
  CHECK(chi(0.0).plus == 0.5);
  CHECK(chi(0.0).minus == 0.5);
  CHECK(chi(1.0).plus == 1.0);
  CHECK(chi(1.0).minus == 0.0);
  CHECK(chi(-1.0).plus == 0.0);
  CHECK(chi(-1.0).minus == 1.0);
}

TEST_CASE("theta functions") {
  ModelParams p = base();
  Complex zm(1.0, -0.5);
  ThetaPair t = theta_pair(p, 0.0, zm);
  Complex via_s = 1.0 + (std::conj(characteristic_s(p, std::conj(zm))) - 1.0) / 2.0;
  CHECK(std::abs(t.theta - via_s) < 1e-12);
  CHECK(t.consistency_defect < 1e-12);

  for (double x : {0.3, 1.7, 5.2}) {
    Complex zp(x, 0.8);
    CHECK(std::abs(theta_pair(p, 1.0, zp).theta_hat - 1.0) < 1e-15);
    CHECK(std::abs(theta_pair(p, -1.0, std::conj(zp)).theta - 1.0) < 1e-15);
    for (double kappa : {-0.7, 0.0, 0.4}) {
      CHECK(theta_pair(p, kappa, zp).consistency_defect < 1e-12);
      CHECK(theta_pair(p, kappa, std::conj(zp)).consistency_defect < 1e-12);
    }
  }
}
