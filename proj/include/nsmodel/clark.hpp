#pragma once

#include <memory>
#include <vector>

#include "nsmodel/bvp.hpp"
#include "nsmodel/herglotz.hpp"
#include "nsmodel/state.hpp"

namespace nsmodel {

inline constexpr double kRootTolerance = 1e-12;
inline constexpr double kClassTolerance = 1e-7;

// F(lambda) = cos(sqrt(lambda) l) - (eta^2 lambda - gamma) sin(sqrt(lambda) l)/(2 sqrt(lambda)) - Re(e^{i tau l} conj(omega))
double dispersion_residual(const ModelParams& p, double lambda);

// Largest |F| accepted as a root at lambda: relative tolerance on the size of the terms of F
// plus the rounding of the abscissa itself.
double root_acceptance(const ModelParams& p, double lambda, double tol = kRootTolerance);

// Scan step in s = sqrt(lambda).
double scan_step(const ModelParams& p);

// All roots of F in (0, lambda_max], ascending. step_factor < 1 refines the scan.
std::vector<double> find_roots(const ModelParams& p, double lambda_max, double step_factor = 1.0);

// Closed-form atom mass; 0 at removable points. Throws NotARoot.
double atom_mass(const ModelParams& p, double lambda_j);

// True if the root sits at a removable coincidence of the mass formula.
bool is_degenerate_root(const ModelParams& p, double lambda_j);

struct ResidueEstimate {
  double by_denominator;  // N / D' with D' from central differences
  double by_contour;      // 64-point trapezoid on a small circle
  double mass;
};

// Mass -2i Res_{lambda_j} 1/(1 + s) computed two ways. Throws NotARoot, OracleDisagreement.
ResidueEstimate residue_estimate(const ModelParams& p, double lambda_j);
double residue_oracle(const ModelParams& p, double lambda_j);

// Determinant of the 3x3 eigenvalue system of the dilation at real lambda, rotated to be real.
double secular_function(const ModelParams& p, double lambda);
std::vector<double> secular_roots(const ModelParams& p, double lambda_max);

struct Atom {
  double lambda;
  double mass;
};

struct ClarkMeasure {
  ModelParams params;
  double lambda_max = 0.0;
  double tail_defect = 0.0;
  std::vector<Atom> atoms;
  int dropped_roots = 0;
};

struct MeasureOptions {
  double step_factor = 1.0;
  bool compute_tail = true;
};

// Fixed unit vector in dom(A): u = e^{i phi x}(1 + x(l - x)/l^2) with e^{i phi l} = conj(omega),
// scalar part eta u(0).
StateVector reference_vector(const ModelParams& p, std::shared_ptr<const QuadratureGrid> grid);

ClarkMeasure build_measure(const ModelParams& p, double lambda_max, MeasureOptions opts = {});

// Smallest lambda_max of the form (n pi / l)^2, n doubling from 16, with tail_defect < target.
double default_lambda_max(const ModelParams& p, double target = 1e-12);

struct ModelVector {
  std::vector<Complex> values;
  std::shared_ptr<const ClarkMeasure> measure;
};

ModelVector embed(const ModelParams& p, const StateVector& v, std::shared_ptr<const ClarkMeasure> m);

// pi sum g conj(f) mu
Complex model_inner(const ModelVector& g, const ModelVector& f);
// pi sum g conj(f) mu / (lambda - z). Throws AtomCollision.
Complex model_resolvent(const ClarkMeasure& m, Complex z, const ModelVector& g, const ModelVector& f,
                        double collision_tol = 1e-12);

// Parseval residual of the reference vector.
double reference_tail_defect(const ModelParams& p, std::shared_ptr<const ClarkMeasure> m);

struct NevanlinnaFit {
  Complex c0;
  Complex c1;
  double residual;  // max abs deviation on the held-out grid
};

// Truncated measure part of 1/(1 + s(z)): -(i/2) sum mu (1/(lambda - z) - lambda/(1 + lambda^2))
Complex measure_transform(const ClarkMeasure& m, Complex z);

NevanlinnaFit nevanlinna_fit(const ModelParams& p, const ClarkMeasure& m,
                             const std::vector<Complex>& grid,
                             const std::vector<Complex>& holdout);

struct PoissonCheck {
  Complex lhs;
  double rhs;
};

PoissonCheck poisson_identity_check(const ModelParams& p, const ClarkMeasure& m, double t,
                                    double delta);

}  // namespace nsmodel
