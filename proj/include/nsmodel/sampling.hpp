#pragma once

#include <random>

#include "nsmodel/exp_poly.hpp"
#include "nsmodel/types.hpp"

namespace nsmodel {

using Rng = std::mt19937_64;

double uniform(Rng& gen, double a, double b);
Complex random_complex(Rng& gen, double scale = 1.0);

// Random admissible parameters; tau kept away from the ends of [-pi, pi).
ModelParams random_params(Rng& gen);

// sum_{|n| <= modes} c_n exp(i (2 pi n / l + phase) x) + cubic polynomial, coefficients decaying in n
ExpPoly random_trig_poly(Rng& gen, double l, int modes = 3);

}  // namespace nsmodel
