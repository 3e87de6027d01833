#pragma once

#include "nsmodel/types.hpp"

namespace nsmodel {

inline constexpr double kDefaultEpsPole = 1e-8;

// Principal square root, cut along (-inf, 0]; -1 maps to +i regardless of the sign of zero.
Complex sqrt_principal(Complex z);

// sin(w)/w, entire.
Complex sinc(Complex w);

// M-function of the prototype operator. eps_pole = 0 disables the proximity guard.
Complex weyl_m(const ModelParams& p, Complex z, double eps_pole = kDefaultEpsPole);

// Straus characteristic function, the Cayley transform of weyl_m.
Complex characteristic_s(const ModelParams& p, Complex z, double eps_pole = kDefaultEpsPole);

// 1/(1 + s(z)).
Complex cayley_kernel(const ModelParams& p, Complex z, double eps_pole = kDefaultEpsPole);

struct ChiPair {
  double plus;
  double minus;
};

ChiPair chi(double kappa);

struct ThetaPair {
  Complex theta;
  Complex theta_hat;
  // max deviation between the M-function and characteristic-function forms
  double consistency_defect;
};

ThetaPair theta_pair(const ModelParams& p, double kappa, Complex z,
                     double eps_pole = kDefaultEpsPole);

}  // namespace nsmodel
