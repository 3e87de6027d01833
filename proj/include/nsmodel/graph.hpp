#pragma once

#include <Eigen/Sparse>
#include <array>
#include <string>
#include <vector>

#include "nsmodel/types.hpp"

namespace nsmodel {

// Three-edge periodic cell: e1 runs V2 -> V1 (stiff), e2 runs V1 -> V2 (soft, a2 = eps^2),
// e3 runs V2 -> V1 (stiff).
struct GraphCell {
  double l1 = 0.25, l2 = 0.5, l3 = 0.25;
  double a1 = 1.0, a3 = 1.0;

  void validate() const;
  std::array<double, 3> lengths() const { return {l1, l2, l3}; }
};

struct VertexWeights {
  std::array<Complex, 3> v1;
  std::array<Complex, 3> v2;
};

VertexWeights vertex_weights(const GraphCell& c, double tau);

// xi_tau = -(a1/l1) e^{i tau (l1 + l3)} - (a3/l3) e^{-i tau l2}
Complex xi(const GraphCell& c, double tau);

// Throws DegenerateXi, ZeroGamma.
ModelParams hom_params(const GraphCell& c, double tau, double eps);

struct FiberDiscretisation {
  GraphCell cell;
  double tau = 0.0;
  double eps = 0.0;
  std::array<int, 3> cells{};
  std::array<int, 4> offsets{};  // edge e occupies rows [offsets[e], offsets[e + 1])
  std::array<double, 3> widths{};
  Eigen::SparseMatrix<Complex> matrix;  // orthonormal coordinates sqrt(h) v

  int size() const { return offsets[3]; }
};

// Central differences for -a_e eps^-2 d_tau^2 per edge (soft edge: -d_tau^2), vertex values
// eliminated. Requires soft_cells, stiff_cells >= 16.
FiberDiscretisation assemble_fiber(const GraphCell& c, double tau, double eps, int soft_cells,
                                   int stiff_cells);
FiberDiscretisation assemble_fiber(const GraphCell& c, double tau, double eps, int soft_cells,
                                   int stiff_cells, const VertexWeights& w);

double hermiticity_defect(const FiberDiscretisation& d);

// Lowest `count` eigenvalues, ascending. Throws EigenFailure.
std::vector<double> fiber_eigs(const FiberDiscretisation& d, int count);

// Partial isometry from the fiber space onto L2(0, l2) + C (soft cell values and beta).
class GaugeMap {
 public:
  GaugeMap(const FiberDiscretisation& d, Complex omega);
  int model_size() const { return soft_ + 1; }
  int fiber_size() const { return n_; }
  void apply(const Eigen::VectorXcd& y, Eigen::VectorXcd& out) const;
  void apply_adjoint(const Eigen::VectorXcd& x, Eigen::VectorXcd& out) const;

 private:
  int n_ = 0, soft_ = 0, soft_offset_ = 0;
  std::vector<std::pair<int, Complex>> beta_row_;
};

// max |Psi Psi^* - I| over the model space
double partial_isometry_defect(const FiberDiscretisation& d, Complex omega);

struct HomogOptions {
  int soft_cells = 200;        // first level of the soft-edge refinement
  int stiff_cells = 32;        // resolvent path keeps the stiff grid fixed
  int max_soft_cells = 12800;
  double rel_tol = 1e-3;       // 3 significant digits
  int eig_soft_cells = 128;    // eigenvalue path refines both grids with ratio 8
  int eig_max_soft_cells = 8192;
};

struct RefinedValue {
  double value = 0.0;
  double finest_raw = 0.0;
  double change = 0.0;
  int finest_soft_cells = 0;
  int levels = 0;
};

// Raw spectral norm of R_fd(z) - Psi^* R_hom(z) Psi at one discretisation.
double resolvent_error_at(const GraphCell& c, double theta, double eps, Complex z, int soft_cells,
                          int stiff_cells);

// Richardson over soft-edge refinement. Throws DiscretisationNotConverged.
RefinedValue resolvent_error(const GraphCell& c, double theta, double eps, Complex z,
                             const HomogOptions& opts = {});

// Lowest three roots of the dispersion function at hom_params.
std::vector<double> hom_eigs(const GraphCell& c, double theta, double eps, int count = 3);

// max_j |lambda_fiber_j - lambda_hom_j| over the first three, with Richardson.
RefinedValue eig_error(const GraphCell& c, double theta, double eps, const HomogOptions& opts = {});

struct SweepRow {
  double eps;
  double resolvent_error;  // NaN when skipped
  double eig_error;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of the log-log fit
  bool monotone = false;
};

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& err);

struct SweepResult {
  GraphCell cell;
  double theta;
  Complex z;
  std::vector<SweepRow> rows;
  RateFit resolvent_fit;  // slope NaN when skipped
  RateFit eig_fit;
};

// Throws InvalidParams if eps_list is shorter than 3 or not decreasing.
SweepResult convergence_sweep(const GraphCell& c, double theta, Complex z,
                              const std::vector<double>& eps_list, bool eig_only = false,
                              const HomogOptions& opts = {});

}  // namespace nsmodel
