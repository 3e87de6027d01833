#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nsmodel/exp_poly.hpp"
#include "nsmodel/herglotz.hpp"
#include "nsmodel/state.hpp"

namespace nsmodel {

inline constexpr double kConditionLimit = 1e12;

struct BoundaryPair {
  Complex g0;
  Complex g1;
};

struct WeylSolution {
  Complex c1;
  Complex c2;
  Complex du;
  Complex beta;
  Complex z;

  // u_z(x) = e^{-i tau x}(c1 e^{i k x} + c2 e^{-i k x})
  ExpPoly function(const ModelParams& p) const;
  StateVector state(const ModelParams& p, std::shared_ptr<const QuadratureGrid> grid) const;
};

// Du = d_tau u(0) - omega d_tau u(l)
Complex d_operator(const ModelParams& p, const StateVector& u);

// (Gamma0, Gamma1) = (Du, beta/eta - u(0)); throws DomainViolation off dom(A_max).
BoundaryPair boundary_maps(const ModelParams& p, const StateVector& s, double tol = 1e-10);

// (-d_tau^2 u, -Du/eta + gamma beta/eta^2)
StateVector apply_a_max(const ModelParams& p, const StateVector& s);

double greens_identity_defect(const ModelParams& p, const StateVector& s1, const StateVector& s2);

WeylSolution weyl_solution(const ModelParams& p, Complex z, double eps_pole = kDefaultEpsPole);

// -d_tau^2 u - z u = f with u(0) = omega u(l), Du = (gamma - eta^2 z) u(0).
ExpPoly generalized_resolvent(const ModelParams& p, Complex z, const ExpPoly& f);
StateVector generalized_resolvent(const ModelParams& p, Complex z, const StateVector& f);

// (A - z)^{-1} on L2(0,l) + C.
StateVector dilation_resolvent(const ModelParams& p, Complex z, const StateVector& rhs);

// (A_kappa - lambda)^{-1} with Gamma1 w = kappa Gamma0 w, kappa = sign * i.
StateVector dissipative_resolvent(const ModelParams& p, Complex lambda, const StateVector& rhs,
                                  int sign);
// Gamma0 of the dissipative solve without building the solution.
Complex dissipative_gamma0(const ModelParams& p, Complex lambda, const ExpPoly& f, Complex r,
                           int sign);

// Corrections onto the operator domains, used to build test elements.
// Adds a multiple of (1 - x/l) so that u(0) = omega u(l).
ExpPoly to_max_domain(const ModelParams& p, const ExpPoly& u);
// Additionally enforces Du = 0.
ExpPoly to_min_domain(const ModelParams& p, const ExpPoly& u);
// State with beta = eta u(0), i.e. an element of dom(A).
StateVector dilation_domain_state(const ModelParams& p, std::shared_ptr<const QuadratureGrid> grid,
                                  const ExpPoly& u);

// Exact dilation resolvent applied to midpoint-cell data on [0,l]; the matrix entries are
// values of the Green's function times the cell width, so apply_adjoint is exact.
class GridDilationResolvent {
 public:
  GridDilationResolvent(const ModelParams& p, Complex z, int cells);

  int cells() const { return cells_; }
  double cell_width() const { return h_; }
  // f: cell values, r: scalar component. Output in the same layout.
  void apply(const std::vector<Complex>& f, Complex r, std::vector<Complex>& u, Complex& beta) const;

 private:
  ModelParams p_;
  Complex z_;
  Complex k_;
  int cells_;
  double h_;
  std::vector<Complex> e_plus_, e_minus_;  // e^{i(k - tau) x_j}, e^{-i(k + tau) x_j}
  Eigen::FullPivLU<Eigen::Matrix3cd> lu_;
  Eigen::Vector3cd row_scale_;
};

}  // namespace nsmodel
