#include "nsmodel/graph.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "nsmodel/bvp.hpp"
#include "nsmodel/clark.hpp"
#include "nsmodel/krylov.hpp"

namespace nsmodel {

namespace {

using SpMat = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

constexpr int kDenseLimit = 600;

// K += c r^* r for a row r with two entries
void add_term(std::vector<Triplet>& t, double c, int i, Complex vi, int j, Complex vj) {
  t.emplace_back(i, i, c * std::norm(vi));
  t.emplace_back(j, j, c * std::norm(vj));
  t.emplace_back(i, j, c * std::conj(vi) * vj);
  t.emplace_back(j, i, c * std::conj(vj) * vi);
}

}  // namespace

void GraphCell::validate() const {
  for (double v : {l1, l2, l3, a1, a3})
    if (!std::isfinite(v) || !(v > 0.0))
      throw Error(ErrorKind::InvalidParams, "cell lengths and coefficients must be positive");
  if (std::abs(l1 + l2 + l3 - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidParams, "cell lengths must sum to 1");
}

VertexWeights vertex_weights(const GraphCell& c, double tau) {
  VertexWeights w;
  w.v1 = {Complex(1.0), Complex(1.0), std::polar(1.0, tau * (c.l2 + c.l3))};
  w.v2 = {std::polar(1.0, tau * c.l3), Complex(1.0), Complex(1.0)};
  return w;
}

Complex xi(const GraphCell& c, double tau) {
  return -(c.a1 / c.l1) * std::polar(1.0, tau * (c.l1 + c.l3)) -
         (c.a3 / c.l3) * std::polar(1.0, -tau * c.l2);
}

ModelParams hom_params(const GraphCell& c, double tau, double eps) {
  c.validate();
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidParams, "eps must be positive");
  if (tau == 0.0) throw Error(ErrorKind::ZeroGamma, "tau = 0 gives gamma = 0");
  Complex x = xi(c, tau);
  if (std::abs(x) < 1e-14) throw Error(ErrorKind::DegenerateXi, "xi_tau vanishes");
  ModelParams p;
  p.l = c.l2;
  p.eta = std::sqrt(c.l1 + c.l3);
  double ratio = tau / eps;
  p.gamma = ratio * ratio / (c.l1 / c.a1 + c.l3 / c.a3);
  p.omega = -std::conj(x) / std::abs(x);
  p.tau = tau;
  p.validate();
  return p;
}

FiberDiscretisation assemble_fiber(const GraphCell& c, double tau, double eps, int soft_cells,
                                   int stiff_cells) {
  return assemble_fiber(c, tau, eps, soft_cells, stiff_cells, vertex_weights(c, tau));
}

FiberDiscretisation assemble_fiber(const GraphCell& c, double tau, double eps, int soft_cells,
                                   int stiff_cells, const VertexWeights& w) {
  c.validate();
  if (soft_cells < 16 || stiff_cells < 16)
    throw Error(ErrorKind::InvalidParams, "grid size must be at least 16");
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidParams, "eps must be positive");

  FiberDiscretisation d;
  d.cell = c;
  d.tau = tau;
  d.eps = eps;
  d.cells = {stiff_cells, soft_cells, stiff_cells};
  d.offsets[0] = 0;
  for (int e = 0; e < 3; ++e) d.offsets[e + 1] = d.offsets[e] + d.cells[e];
  const int n = d.offsets[3];
  const int vertex[2] = {n, n + 1};

  auto len = c.lengths();
  const std::array<Complex, 3>* wv[2] = {&w.v1, &w.v2};
  const int start[3] = {1, 0, 1};
  const int end[3] = {0, 1, 0};
  const double coef[3] = {c.a1 / (eps * eps), 1.0, c.a3 / (eps * eps)};

  std::vector<Triplet> t;
  for (int e = 0; e < 3; ++e) {
    int m = d.cells[e];
    double h = len[e] / m;
    d.widths[e] = h;
    Complex ph = std::polar(1.0, tau * h), ph2 = std::polar(1.0, tau * h / 2);
    int o = d.offsets[e];
    int s = start[e], en = end[e];
    add_term(t, coef[e] / (h / 2), o, ph2, vertex[s], -std::conj((*wv[s])[e]));
    for (int i = 0; i + 1 < m; ++i) add_term(t, coef[e] / h, o + i + 1, ph, o + i, Complex(-1.0));
    add_term(t, coef[e] / (h / 2), vertex[en], ph2 * std::conj((*wv[en])[e]), o + m - 1, Complex(-1.0));
  }
  SpMat k(n + 2, n + 2);
  k.setFromTriplets(t.begin(), t.end());

  // Schur complement onto the cell unknowns; the vertex block is diagonal
  std::vector<Triplet> out;
  out.reserve(t.size());
  for (int col = 0; col < n; ++col)
    for (SpMat::InnerIterator it(k, col); it; ++it)
      if (it.row() < n) out.emplace_back(it.row(), col, it.value());
  for (int v : vertex) {
    Complex dvv = k.coeff(v, v);
    std::vector<std::pair<int, Complex>> col;
    for (SpMat::InnerIterator it(k, v); it; ++it)
      if (it.row() < n) col.emplace_back(it.row(), it.value());
    for (auto [r, kr] : col)
      for (auto [r2, kr2] : col) out.emplace_back(r, r2, -kr * std::conj(kr2) / dvv);
  }
  std::vector<double> sq(n);
  for (int e = 0; e < 3; ++e)
    for (int i = d.offsets[e]; i < d.offsets[e + 1]; ++i) sq[i] = std::sqrt(d.widths[e]);
  for (auto& tr : out) tr = Triplet(tr.row(), tr.col(), tr.value() / (sq[tr.row()] * sq[tr.col()]));
  d.matrix.resize(n, n);
  d.matrix.setFromTriplets(out.begin(), out.end());
  d.matrix.makeCompressed();
  return d;
}

double hermiticity_defect(const FiberDiscretisation& d) {
  SpMat diff = SpMat(d.matrix.adjoint()) - d.matrix;
  double scale = 0.0, defect = 0.0;
  for (int col = 0; col < d.matrix.outerSize(); ++col)
    for (SpMat::InnerIterator it(d.matrix, col); it; ++it) scale = std::max(scale, std::abs(it.value()));
  for (int col = 0; col < diff.outerSize(); ++col)
    for (SpMat::InnerIterator it(diff, col); it; ++it) defect = std::max(defect, std::abs(it.value()));
  return scale > 0.0 ? defect / scale : defect;
}

std::vector<double> fiber_eigs(const FiberDiscretisation& d, int count) {
  const int n = d.size();
  if (count < 0 || count > n) throw Error(ErrorKind::InvalidParams, "count out of range");
  if (count == 0) return {};
  if (n <= kDenseLimit) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd(d.matrix);
    a = (a + a.adjoint().eval()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::EigenFailure, "dense eigensolver failed");
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + count);
    return v;
  }
  // shift-invert about -1: the form is nonnegative, so the lowest eigenvalues become the largest
  SpMat shifted = d.matrix;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) += 1.0;
  Eigen::SimplicialLDLT<SpMat> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::EigenFailure, "factorisation of A + 1 failed");
  LinearMap op = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y = ldlt.solve(x); };
  int steps = std::max(60, 4 * count + 40);
  for (int attempt = 0; attempt < 4; ++attempt, steps *= 2) {
    LanczosResult r = lanczos_largest(op, n, count, std::min(steps, n), 1e-13);
    if (!r.converged) continue;
    std::vector<double> v;
    for (double theta : r.values) v.push_back(1.0 / theta - 1.0);
    std::sort(v.begin(), v.end());
    return v;
  }
  throw Error(ErrorKind::EigenFailure, "Lanczos did not converge");
}

GaugeMap::GaugeMap(const FiberDiscretisation& d, Complex omega)
    : n_(d.size()), soft_(d.cells[1]), soft_offset_(d.offsets[1]) {
  const GraphCell& c = d.cell;
  double tau = d.tau;
  double norm = 1.0 / std::sqrt(c.l1 + c.l3);
  auto add_edge = [&](int e, double le, Complex g0, Complex gl) {
    double phase = std::arg(gl / g0);
    int m = d.cells[e];
    double h = d.widths[e];
    for (int i = 0; i < m; ++i) {
      double x = (i + 0.5) * h;
      Complex g = g0 * std::polar(1.0, phase * x / le);
      beta_row_.emplace_back(d.offsets[e] + i, std::sqrt(h) * std::conj(g) * norm);
    }
  };
  add_edge(0, c.l1, std::polar(1.0, -tau * c.l3) * std::conj(omega), Complex(1.0));
  add_edge(2, c.l3, std::conj(omega), std::polar(1.0, -tau * (c.l2 + c.l3)));
}

void GaugeMap::apply(const Eigen::VectorXcd& y, Eigen::VectorXcd& out) const {
  out.resize(soft_ + 1);
  out.head(soft_) = y.segment(soft_offset_, soft_);
  Complex b = 0.0;
  for (auto [i, v] : beta_row_) b += v * y(i);
  out(soft_) = b;
}

void GaugeMap::apply_adjoint(const Eigen::VectorXcd& x, Eigen::VectorXcd& out) const {
  out = Eigen::VectorXcd::Zero(n_);
  out.segment(soft_offset_, soft_) = x.head(soft_);
  for (auto [i, v] : beta_row_) out(i) = std::conj(v) * x(soft_);
}

double partial_isometry_defect(const FiberDiscretisation& d, Complex omega) {
  GaugeMap psi(d, omega);
  int m = psi.model_size();
  double defect = 0.0;
  Eigen::VectorXcd e(m), y, back;
  for (int j = 0; j < m; ++j) {
    e.setZero();
    e(j) = 1.0;
    psi.apply_adjoint(e, y);
    psi.apply(y, back);
    back(j) -= 1.0;
    defect = std::max(defect, back.cwiseAbs().maxCoeff());
  }
  return defect;
}

double resolvent_error_at(const GraphCell& c, double theta, double eps, Complex z, int soft_cells,
                          int stiff_cells) {
  if (z.imag() == 0.0) throw Error(ErrorKind::InvalidParams, "z must be nonreal");
  double tau = eps * theta;
  ModelParams hp = hom_params(c, tau, eps);
  FiberDiscretisation d = assemble_fiber(c, tau, eps, soft_cells, stiff_cells);
  GaugeMap psi(d, hp.omega);
  const int n = d.size();

  auto factor = [&](Complex w) {
    SpMat a = d.matrix;
    for (int i = 0; i < n; ++i) a.coeffRef(i, i) -= w;
    a.makeCompressed();
    auto lu = std::make_unique<Eigen::SparseLU<SpMat>>();
    lu->analyzePattern(a);
    lu->factorize(a);
    if (lu->info() != Eigen::Success) throw Error(ErrorKind::SpectralPoint, "fiber resolvent is singular");
    return lu;
  };
  auto lu = factor(z);
  auto lu_bar = factor(std::conj(z));
  GridDilationResolvent hom(hp, z, soft_cells), hom_bar(hp, std::conj(z), soft_cells);
  double sh = std::sqrt(hom.cell_width());

  auto model = [&](const GridDilationResolvent& r, const Eigen::VectorXcd& x, Eigen::VectorXcd& out) {
    std::vector<Complex> f(soft_cells), u;
    for (int i = 0; i < soft_cells; ++i) f[i] = x(i) / sh;
    Complex beta;
    r.apply(f, x(soft_cells), u, beta);
    out.resize(soft_cells + 1);
    for (int i = 0; i < soft_cells; ++i) out(i) = u[i] * sh;
    out(soft_cells) = beta;
  };
  auto diff = [&](Eigen::SparseLU<SpMat>& l, const GridDilationResolvent& r) {
    return [&](const Eigen::VectorXcd& y, Eigen::VectorXcd& out) {
      Eigen::VectorXcd p, q, back;
      psi.apply(y, p);
      model(r, p, q);
      psi.apply_adjoint(q, back);
      out = l.solve(y) - back;
    };
  };
  SingularEstimate s = top_singular_value(diff(*lu, hom), diff(*lu_bar, hom_bar), n, n, 120, 1e-12);
  if (!s.converged) throw Error(ErrorKind::DiscretisationNotConverged, "norm iteration did not converge");
  return s.value;
}

namespace {

template <class Eval>
RefinedValue richardson(Eval eval, int first, int max_cells, double tol_abs, double tol_rel) {
  RefinedValue out;
  std::vector<double> raw, rich;
  for (int m = first; m <= max_cells; m *= 2) {
    raw.push_back(eval(m));
    out.finest_raw = raw.back();
    out.finest_soft_cells = m;
    out.levels = static_cast<int>(raw.size());
    if (raw.size() >= 2) rich.push_back((4.0 * raw.back() - raw[raw.size() - 2]) / 3.0);
    if (rich.size() >= 2) {
      double v = rich.back();
      out.value = v;
      out.change = std::abs(v - rich[rich.size() - 2]);
      if (out.change <= std::max(tol_abs, tol_rel * std::abs(v))) return out;
    }
  }
  throw Error(ErrorKind::DiscretisationNotConverged,
              "refinement did not stabilise (last change " + std::to_string(out.change) + ")");
}

}  // namespace

RefinedValue resolvent_error(const GraphCell& c, double theta, double eps, Complex z,
                             const HomogOptions& opts) {
  return richardson(
      [&](int m) { return resolvent_error_at(c, theta, eps, z, m, opts.stiff_cells); },
      opts.soft_cells, opts.max_soft_cells, 0.0, opts.rel_tol);
}

std::vector<double> hom_eigs(const GraphCell& c, double theta, double eps, int count) {
  ModelParams hp = hom_params(c, eps * theta, eps);
  double lmax = std::pow(4.0 * kPi / hp.l, 2);
  for (int i = 0; i < 20; ++i, lmax *= 4.0) {
    std::vector<double> r = find_roots(hp, lmax);
    if (static_cast<int>(r.size()) >= count) return {r.begin(), r.begin() + count};
  }
  throw Error(ErrorKind::EigenFailure, "not enough dispersion roots");
}

RefinedValue eig_error(const GraphCell& c, double theta, double eps, const HomogOptions& opts) {
  const int count = 3;
  std::vector<double> target = hom_eigs(c, theta, eps, count);
  const double tau = eps * theta;
  std::vector<std::vector<double>> raw;
  std::vector<std::vector<double>> rich;
  RefinedValue out;
  for (int m = opts.eig_soft_cells; m <= opts.eig_max_soft_cells; m *= 2) {
    raw.push_back(fiber_eigs(assemble_fiber(c, tau, eps, m, std::max(16, m / 8)), count));
    out.levels = static_cast<int>(raw.size());
    out.finest_soft_cells = m;
    double e = 0.0;
    for (int j = 0; j < count; ++j) e = std::max(e, std::abs(raw.back()[j] - target[j]));
    out.finest_raw = e;
    if (raw.size() < 2) continue;
    std::vector<double> r(count);
    for (int j = 0; j < count; ++j) r[j] = (4.0 * raw.back()[j] - raw[raw.size() - 2][j]) / 3.0;
    rich.push_back(r);
    if (rich.size() < 2) continue;
    double change = 0.0, err = 0.0;
    for (int j = 0; j < count; ++j) {
      change = std::max(change, std::abs(r[j] - rich[rich.size() - 2][j]));
      err = std::max(err, std::abs(r[j] - target[j]));
    }
    out.value = err;
    out.change = change;
    if (change <= 1e-2 * eps * eps) return out;
  }
  throw Error(ErrorKind::DiscretisationNotConverged,
              "eigenvalue refinement did not stabilise (last change " + std::to_string(out.change) + ")");
}

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& err) {
  RateFit f;
  const int n = static_cast<int>(eps.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    double x = std::log(eps[i]), y = std::log(err[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0;
  for (int i = 0; i < n; ++i) {
    double r = std::log(err[i]) - (f.intercept + f.slope * std::log(eps[i]));
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  f.monotone = true;
  for (int i = 1; i < n; ++i) f.monotone = f.monotone && err[i] < err[i - 1];
  return f;
}

SweepResult convergence_sweep(const GraphCell& c, double theta, Complex z,
                              const std::vector<double>& eps_list, bool eig_only,
                              const HomogOptions& opts) {
  if (eps_list.size() < 3) throw Error(ErrorKind::InvalidParams, "need at least 3 eps values");
  for (size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw Error(ErrorKind::InvalidParams, "eps must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw Error(ErrorKind::InvalidParams, "eps list must be decreasing");
  }
  SweepResult s;
  s.cell = c;
  s.theta = theta;
  s.z = z;
  std::vector<double> res, eig;
  for (double eps : eps_list) {
    SweepRow row{eps, std::numeric_limits<double>::quiet_NaN(), 0.0};
    if (!eig_only) row.resolvent_error = resolvent_error(c, theta, eps, z, opts).value;
    row.eig_error = eig_error(c, theta, eps, opts).value;
    res.push_back(row.resolvent_error);
    eig.push_back(row.eig_error);
    s.rows.push_back(row);
  }
  if (eig_only) {
    s.resolvent_fit.slope = s.resolvent_fit.intercept = s.resolvent_fit.residual =
        std::numeric_limits<double>::quiet_NaN();
  } else {
    s.resolvent_fit = fit_rate(eps_list, res);
  }
  s.eig_fit = fit_rate(eps_list, eig);
  return s;
}

}  // namespace nsmodel
