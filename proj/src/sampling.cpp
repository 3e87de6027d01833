#include "nsmodel/sampling.hpp"

#include <cmath>

namespace nsmodel {

double uniform(Rng& gen, double a, double b) {
  // fixed construction from raw 53-bit draws so streams match across standard libraries
  double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return a + (b - a) * u;
}

Complex random_complex(Rng& gen, double scale) {
  double re = uniform(gen, -scale, scale);
  double im = uniform(gen, -scale, scale);
  return {re, im};
}

ModelParams random_params(Rng& gen) {
  double l = uniform(gen, 0.5, 3.5);
  double eta = uniform(gen, 0.3, 2.0);
  if (uniform(gen, 0.0, 1.0) < 0.5) eta = -eta;
  double gamma = uniform(gen, 0.1, 3.0);
  double arg = uniform(gen, 0.0, 2.0 * kPi);
  double tau = uniform(gen, -3.0, 3.0);
  return ModelParams::make(l, eta, gamma, arg, tau);
}

ExpPoly random_trig_poly(Rng& gen, double l, int modes) {
  ExpPoly u;
  double phase = uniform(gen, -1.0, 1.0);
  for (int n = -modes; n <= modes; ++n) {
    Complex c = random_complex(gen, 1.0 / (1.0 + n * n));
    u += ExpPoly::exponential(c, Complex(0.0, 2.0 * kPi * n / l + phase));
  }
  for (int k = 0; k <= 3; ++k) {
    Complex c = random_complex(gen, 0.5 / std::pow(l, k));
    u += ExpPoly::monomial(c, k);
  }
  return u;
}

}  // namespace nsmodel
