#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace nsmodel {

using LinearMap = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

struct SingularEstimate {
  double value = 0.0;
  int steps = 0;
  bool converged = false;
};

// Largest singular value of an operator C^n -> C^m given by apply and apply_adjoint
// (Golub-Kahan bidiagonalisation with full reorthogonalisation, deterministic start).
SingularEstimate top_singular_value(const LinearMap& apply, const LinearMap& apply_adjoint, int n, int m,
                                    int max_steps = 80, double rel_tol = 1e-12);

struct LanczosResult {
  std::vector<double> values;  // largest eigenvalues, descending
  bool converged = false;
};

// Largest `count` eigenvalues of a Hermitian operator on C^n.
LanczosResult lanczos_largest(const LinearMap& apply, int n, int count, int max_steps,
                              double rel_tol = 1e-12);

}  // namespace nsmodel
