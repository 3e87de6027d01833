#include "nsmodel/bvp.hpp"

#include <algorithm>
#include <cmath>

namespace nsmodel {

namespace {

template <int N>
using Mat = Eigen::Matrix<Complex, N, N>;
template <int N>
using Vec = Eigen::Matrix<Complex, N, 1>;

// Rows with large entries are scaled down (never up, so a vanishing row keeps the
// system visibly singular), then full-pivot LU with a condition-number guard.
template <int N>
Eigen::FullPivLU<Mat<N>> factor_boundary_system(Mat<N>& a, Vec<N>& scale, const char* what) {
  for (int r = 0; r < N; ++r) {
    double s = a.row(r).cwiseAbs().maxCoeff();
    if (!(s > 0.0) || !std::isfinite(s))
      throw Error(ErrorKind::SpectralPoint, std::string(what) + ": degenerate boundary row");
    scale(r) = 1.0 / std::max(1.0, s);
    a.row(r) *= scale(r);
  }
  Eigen::JacobiSVD<Mat<N>> svd(a);
  auto sv = svd.singularValues();
  double smin = sv(N - 1);
  if (!(smin > 0.0) || sv(0) / smin > kConditionLimit)
    throw Error(ErrorKind::SpectralPoint, std::string(what) + ": boundary system is singular");
  return Eigen::FullPivLU<Mat<N>>(a);
}

template <int N>
Vec<N> solve_boundary_system(Mat<N> a, Vec<N> b, const char* what) {
  Vec<N> scale;
  auto lu = factor_boundary_system<N>(a, scale, what);
  return lu.solve(Vec<N>(b.cwiseProduct(scale)));
}

Complex wavenumber(const ModelParams& p, Complex z) {
  Complex k = sqrt_principal(z);
  if (std::abs(k) * p.l < 1e-8)
    throw Error(ErrorKind::SpectralPoint, "fundamental system degenerates at z = 0");
  return k;
}

// Variation of parameters for -d_tau^2 u - k^2 u = f, u(0) = d_tau u(0) = 0.
struct Particular {
  Complex k;
  Complex kp, km;  // k - tau, k + tau
  ExpPoly f;
  double l;

  Complex i_plus(double x) const { return f.times_exp(-kI * kp).integral(0.0, x, l); }
  Complex i_minus(double x) const { return f.times_exp(kI * km).integral(0.0, x, l); }

  // (u_p(l), d_tau u_p(l))
  std::pair<Complex, Complex> traces() const {
    Complex a = std::exp(kI * kp * l) * i_plus(l);
    Complex b = std::exp(-kI * km * l) * i_minus(l);
    return {-(a - b) / (2.0 * kI * k), -0.5 * (a + b)};
  }

  ExpPoly function() const {
    ExpPoly ip = f.times_exp(-kI * kp).primitive(l).times_exp(kI * kp);
    ExpPoly im = f.times_exp(kI * km).primitive(l).times_exp(-kI * km);
    return (ip - im) * (-1.0 / (2.0 * kI * k));
  }
};

Particular make_particular(const ModelParams& p, Complex k, const ExpPoly& f) {
  return Particular{k, k - p.tau, k + p.tau, f, p.l};
}

ExpPoly homogeneous(const ModelParams& p, Complex k, Complex c1, Complex c2) {
  return ExpPoly::exponential(c1, kI * (k - p.tau)) + ExpPoly::exponential(c2, -kI * (k + p.tau));
}

// a = 1 - rho e^{ikl}, b = 1 - rho e^{-ikl}, rho = omega e^{-i tau l}
std::pair<Complex, Complex> trace_coefficients(const ModelParams& p, Complex k) {
  Complex rho = p.omega * std::exp(Complex(0.0, -p.tau * p.l));
  return {1.0 - rho * std::exp(kI * k * p.l), 1.0 - rho * std::exp(-kI * k * p.l)};
}

}  // namespace

ExpPoly WeylSolution::function(const ModelParams& p) const {
  return homogeneous(p, sqrt_principal(z), c1, c2);
}

StateVector WeylSolution::state(const ModelParams& p,
                                std::shared_ptr<const QuadratureGrid> grid) const {
  return StateVector::from_function(std::move(grid), function(p), beta);
}

Complex d_operator(const ModelParams& p, const StateVector& u) {
  ExpPoly du = d_tau(u.descriptor(), p.tau);
  return du(0.0) - p.omega * du(p.l);
}

BoundaryPair boundary_maps(const ModelParams& p, const StateVector& s, double tol) {
  const ExpPoly& u = s.descriptor();
  Complex u0 = u(0.0);
  Complex ul = u(p.l);
  if (std::abs(u0 - p.omega * ul) > tol * std::max({1.0, std::abs(u0), std::abs(ul)}))
    throw Error(ErrorKind::DomainViolation, "u(0) != omega u(l)");
  return {d_operator(p, s), s.scalar() / p.eta - u0};
}

StateVector apply_a_max(const ModelParams& p, const StateVector& s) {
  const ExpPoly& u = s.descriptor();
  ExpPoly au = d_tau(d_tau(u, p.tau), p.tau) * Complex(-1.0);
  Complex ab = -d_operator(p, s) / p.eta + p.gamma * s.scalar() / (p.eta * p.eta);
  return StateVector::from_function(s.grid_ptr(), std::move(au), ab);
}

double greens_identity_defect(const ModelParams& p, const StateVector& s1, const StateVector& s2) {
  BoundaryPair b1 = boundary_maps(p, s1);
  BoundaryPair b2 = boundary_maps(p, s2);
  Complex lhs = inner(apply_a_max(p, s1), s2) - inner(s1, apply_a_max(p, s2));
  Complex form = b1.g1 * std::conj(b2.g0) - b1.g0 * std::conj(b2.g1);
  return std::abs(lhs - form);
}

WeylSolution weyl_solution(const ModelParams& p, Complex z, double eps_pole) {
  Complex k = sqrt_principal(z);
  Complex s = std::sin(k * p.l);
  Complex c = std::cos(k * p.l);
  if (std::abs(s) <= eps_pole * std::max(1.0, std::abs(c)))
    throw Error(ErrorKind::SingularNormalisation, "sin(sqrt(z) l) vanishes");
  Complex w = std::conj(p.omega) * std::exp(Complex(0.0, p.tau * p.l));
  WeylSolution out;
  out.z = z;
  out.c1 = (w - std::exp(-kI * k * p.l)) / (2.0 * kI * s);
  out.c2 = (std::exp(kI * k * p.l) - w) / (2.0 * kI * s);
  out.du = 2.0 * k * (p.dispersion_rhs() - c) / s;
  Complex d = p.gamma - p.eta * p.eta * z;
  if (std::abs(d) <= eps_pole * std::max(p.gamma, p.eta * p.eta * std::abs(z)))
    throw Error(ErrorKind::PoleProximity, "denominator gamma - eta^2 z vanishes");
  out.beta = p.eta * out.du / d;
  return out;
}

ExpPoly generalized_resolvent(const ModelParams& p, Complex z, const ExpPoly& f) {
  Complex k = wavenumber(p, z);
  Particular part = make_particular(p, k, f);
  auto [ul, dl] = part.traces();
  auto [a, b] = trace_coefficients(p, k);
  Complex q = p.gamma - p.eta * p.eta * z;
  Mat<2> m;
  m << a, b, kI * k * a - q, -kI * k * b - q;
  Vec<2> rhs(p.omega * ul, p.omega * dl);
  Vec<2> c = solve_boundary_system<2>(m, rhs, "generalized resolvent");
  return part.function() + homogeneous(p, k, c(0), c(1));
}

StateVector generalized_resolvent(const ModelParams& p, Complex z, const StateVector& f) {
  return StateVector::from_function(f.grid_ptr(), generalized_resolvent(p, z, f.descriptor()), 0.0);
}

StateVector dilation_resolvent(const ModelParams& p, Complex z, const StateVector& rhs) {
  Complex k = wavenumber(p, z);
  Particular part = make_particular(p, k, rhs.descriptor());
  auto [ul, dl] = part.traces();
  auto [a, b] = trace_coefficients(p, k);
  double eta = p.eta;
  Mat<3> m;
  m << a, b, 0.0,
       eta, eta, -1.0,
       -kI * k * a / eta, kI * k * b / eta, p.gamma / (eta * eta) - z;
  Vec<3> r(p.omega * ul, 0.0, rhs.scalar() - p.omega * dl / eta);
  Vec<3> c = solve_boundary_system<3>(m, r, "dilation resolvent");
  return StateVector::from_function(rhs.grid_ptr(), part.function() + homogeneous(p, k, c(0), c(1)),
                                    c(2));
}

namespace {

Vec<3> dissipative_coefficients(const ModelParams& p, Complex lambda, const Particular& part,
                                Complex r, int sign) {
  Complex k = part.k;
  Complex kappa = sign >= 0 ? kI : -kI;
  auto [ul, dl] = part.traces();
  auto [a, b] = trace_coefficients(p, k);
  double eta = p.eta;
  Complex dup = -p.omega * dl;
  Mat<3> m;
  m << a, b, 0.0,
       -1.0 - kappa * kI * k * a, -1.0 + kappa * kI * k * b, 1.0 / eta,
       -kI * k * a / eta, kI * k * b / eta, p.gamma / (eta * eta) - lambda;
  Vec<3> rhs(p.omega * ul, kappa * dup, r + dup / eta);
  return solve_boundary_system<3>(m, rhs, "dissipative resolvent");
}

}  // namespace

StateVector dissipative_resolvent(const ModelParams& p, Complex lambda, const StateVector& rhs,
                                  int sign) {
  Complex k = wavenumber(p, lambda);
  Particular part = make_particular(p, k, rhs.descriptor());
  Vec<3> c = dissipative_coefficients(p, lambda, part, rhs.scalar(), sign);
  return StateVector::from_function(rhs.grid_ptr(), part.function() + homogeneous(p, k, c(0), c(1)),
                                    c(2));
}

Complex dissipative_gamma0(const ModelParams& p, Complex lambda, const ExpPoly& f, Complex r,
                           int sign) {
  Complex k = wavenumber(p, lambda);
  Particular part = make_particular(p, k, f);
  Vec<3> c = dissipative_coefficients(p, lambda, part, r, sign);
  auto [a, b] = trace_coefficients(p, k);
  Complex dl = part.traces().second;
  return kI * k * (a * c(0) - b * c(1)) - p.omega * dl;
}

ExpPoly to_max_domain(const ModelParams& p, const ExpPoly& u) {
  Complex a = p.omega * u(p.l) - u(0.0);
  return u + ExpPoly::constant(a) + ExpPoly::monomial(-a / p.l, 1);
}

ExpPoly to_min_domain(const ModelParams& p, const ExpPoly& u) {
  ExpPoly v = to_max_domain(p, u);
  ExpPoly dv = d_tau(v, p.tau);
  Complex d = dv(0.0) - p.omega * dv(p.l);
  double l = p.l;
  // psi = x (l - x)^2 / l^2 has psi(0) = psi(l) = 0 and D psi = 1
  ExpPoly psi = ExpPoly::monomial(1.0, 1) + ExpPoly::monomial(-2.0 / l, 2) +
                ExpPoly::monomial(1.0 / (l * l), 3);
  return v - psi * d;
}

StateVector dilation_domain_state(const ModelParams& p, std::shared_ptr<const QuadratureGrid> grid,
                                  const ExpPoly& u) {
  return StateVector::from_function(std::move(grid), u, p.eta * u(0.0));
}

GridDilationResolvent::GridDilationResolvent(const ModelParams& p, Complex z, int cells)
    : p_(p), z_(z), k_(wavenumber(p, z)), cells_(cells), h_(p.l / cells) {
  e_plus_.resize(cells);
  e_minus_.resize(cells);
  for (int j = 0; j < cells; ++j) {
    double x = (j + 0.5) * h_;
    e_plus_[j] = std::exp(kI * (k_ - p.tau) * x);
    e_minus_[j] = std::exp(-kI * (k_ + p.tau) * x);
  }
  auto [a, b] = trace_coefficients(p, k_);
  double eta = p.eta;
  Mat<3> m;
  m << a, b, 0.0,
       eta, eta, -1.0,
       -kI * k_ * a / eta, kI * k_ * b / eta, p.gamma / (eta * eta) - z;
  Vec<3> scale;
  lu_ = factor_boundary_system<3>(m, scale, "grid dilation resolvent");
  row_scale_ = scale;
}

void GridDilationResolvent::apply(const std::vector<Complex>& f, Complex r, std::vector<Complex>& u,
                                  Complex& beta) const {
  const int n = cells_;
  u.assign(n, 0.0);
  Complex sp = 0.0, sm = 0.0;
  const Complex pref = -1.0 / (2.0 * kI * k_);
  for (int i = 0; i < n; ++i) {
    u[i] = pref * (e_plus_[i] * sp - e_minus_[i] * sm);
    sp += h_ * f[i] / e_plus_[i];
    sm += h_ * f[i] / e_minus_[i];
  }
  Complex ap = std::exp(kI * (k_ - p_.tau) * p_.l) * sp;
  Complex am = std::exp(-kI * (k_ + p_.tau) * p_.l) * sm;
  Complex ul = pref * (ap - am);
  Complex dl = -0.5 * (ap + am);
  Vec<3> rhs(p_.omega * ul, 0.0, r - p_.omega * dl / p_.eta);
  Vec<3> c = lu_.solve(Vec<3>(rhs.cwiseProduct(row_scale_)));
  for (int i = 0; i < n; ++i) u[i] += c(0) * e_plus_[i] + c(1) * e_minus_[i];
  beta = c(2);
}

}  // namespace nsmodel
