#include "nsmodel/clark.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nsmodel {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sinc_real(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double sinc_real_derivative(double x) {
  if (std::abs(x) < 1e-3) return -x / 3.0 + x * x * x / 30.0;
  return (x * std::cos(x) - std::sin(x)) / (x * x);
}

// F as a function of s = sqrt(lambda)
double phi(const ModelParams& p, double s) {
  double sl = s * p.l;
  double q = p.eta * p.eta * s * s - p.gamma;
  return std::cos(sl) - 0.5 * q * p.l * sinc_real(sl) - p.dispersion_rhs();
}

double phi_derivative(const ModelParams& p, double s) {
  double sl = s * p.l;
  double q = p.eta * p.eta * s * s - p.gamma;
  return -p.l * std::sin(sl) -
         0.5 * p.l * (2.0 * p.eta * p.eta * s * sinc_real(sl) + q * p.l * sinc_real_derivative(sl));
}

double acceptance_in_s(const ModelParams& p, double s, double tol) {
  double sl = s * p.l;
  double q = std::abs(p.eta * p.eta * s * s - p.gamma);
  double r = std::abs(p.dispersion_rhs());
  double size = 1.0 + r + q * std::min(0.5 * p.l, 0.5 / std::max(s, 1e-300));
  double slope = p.l + 0.5 * p.l *
                           (2.0 * p.eta * p.eta * s * std::min(1.0, 1.0 / sl) +
                            q * p.l * std::min(0.5, 2.0 / sl));
  return tol * size + 8.0 * kEps * s * slope;
}

double refine_bracket(const ModelParams& p, double a, double b) {
  auto f = [&](double s) { return phi(p, s); };
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, a, b, tol, iters);
  return std::abs(f(r.first)) <= std::abs(f(r.second)) ? r.first : r.second;
}

std::string describe(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_root(const ModelParams& p, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::NotARoot, "lambda must be positive");
  double f = dispersion_residual(p, lambda);
  if (std::abs(f) > root_acceptance(p, lambda))
    throw Error(ErrorKind::NotARoot,
                "|F(" + describe(lambda) + ")| = " + describe(std::abs(f)) + " exceeds tolerance");
}

}  // namespace

double dispersion_residual(const ModelParams& p, double lambda) {
  return phi(p, std::sqrt(lambda));
}

double root_acceptance(const ModelParams& p, double lambda, double tol) {
  return acceptance_in_s(p, std::sqrt(lambda), tol);
}

double scan_step(const ModelParams& p) { return std::min(kPi / (8.0 * p.l), 0.05); }

std::vector<double> find_roots(const ModelParams& p, double lambda_max, double step_factor) {
  if (!(lambda_max > 0.0)) throw Error(ErrorKind::InvalidParams, "lambda_max must be positive");
  double h = scan_step(p) * step_factor;
  double s_max = std::sqrt(lambda_max);
  auto n = static_cast<std::size_t>(std::ceil(s_max / h));
  std::vector<double> s(n + 1), v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    s[i] = std::min(double(i) * h, s_max);
    v[i] = phi(p, s[i]);
  }

  std::vector<double> roots;
  for (std::size_t i = 1; i <= n; ++i) {
    if (v[i] == 0.0) {
      roots.push_back(s[i]);
    } else if (v[i - 1] != 0.0 && (v[i - 1] < 0.0) != (v[i] < 0.0)) {
      roots.push_back(refine_bracket(p, s[i - 1], s[i]));
    }
  }

  // near-tangential roots: small local minimum of |F| without a sign change
  for (std::size_t i = 1; i + 1 <= n; ++i) {
    double a = v[i - 1], b = v[i], c = v[i + 1];
    if (b == 0.0 || (a < 0.0) != (b < 0.0) || (c < 0.0) != (b < 0.0)) continue;
    if (std::abs(b) > std::abs(a) || std::abs(b) > std::abs(c)) continue;
    if (std::abs(b) > std::sqrt(kRootTolerance) * (1.0 + acceptance_in_s(p, s[i], 1.0))) continue;
    double sign = b < 0.0 ? -1.0 : 1.0;
    auto g = [&](double x) { return sign * phi(p, x); };
    auto m = boost::math::tools::brent_find_minima(g, s[i - 1], s[i + 1],
                                                   std::numeric_limits<double>::digits / 2);
    double sm = m.first;
    double vm = phi(p, sm);
    if ((vm < 0.0) != (b < 0.0) && vm != 0.0) {
      roots.push_back(refine_bracket(p, s[i - 1], sm));
      roots.push_back(refine_bracket(p, sm, s[i + 1]));
    } else if (std::abs(vm) <= acceptance_in_s(p, sm, kRootTolerance)) {
      roots.push_back(sm);
    }
  }

  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) { return std::abs(x - y) <= 4.0 * kEps * y; }),
              roots.end());

  // consecutive simple roots must alternate the sign of F'
  double last = 0.0;
  for (double r : roots) {
    double d = phi_derivative(p, r);
    if (std::abs(d) <= 1e-8 * (1.0 + acceptance_in_s(p, r, 1.0) / std::max(r, 1e-300))) continue;
    if (last != 0.0 && (last < 0.0) == (d < 0.0))
      throw Error(ErrorKind::ScanResolutionExceeded,
                  "two roots share a scan cell near lambda = " + describe(r * r));
    last = d;
  }

  std::vector<double> out;
  out.reserve(roots.size());
  for (double r : roots)
    if (r > 0.0 && r <= s_max) out.push_back(r * r);
  return out;
}

bool is_degenerate_root(const ModelParams& p, double lambda) {
  double s = std::sqrt(lambda);
  double sl = s * p.l;
  double q = p.eta * p.eta * lambda - p.gamma;
  double qs = std::abs(q) / std::max(p.eta * p.eta * lambda, p.gamma);
  return std::min({std::abs(std::sin(sl)), qs, std::abs(p.dispersion_rhs() - std::cos(sl))}) <=
         kClassTolerance;
}

double atom_mass(const ModelParams& p, double lambda) {
  require_root(p, lambda);
  if (is_degenerate_root(p, lambda)) return 0.0;
  double s = std::sqrt(lambda);
  double sl = s * p.l;
  double q = p.eta * p.eta * lambda - p.gamma;
  double e2 = p.eta * p.eta;
  double denom = e2 + p.gamma / lambda + 2.0 * p.l + (p.l / s) * q * std::cos(sl) / std::sin(sl);
  return 2.0 * q * q / denom;
}

ResidueEstimate residue_estimate(const ModelParams& p, double lambda) {
  require_root(p, lambda);
  double s = std::sqrt(lambda);
  double r = p.dispersion_rhs();
  double e2 = p.eta * p.eta;

  // (a) N / D'
  auto denom = [&](double x) {
    return (e2 * x * x - p.gamma) * std::sin(x * p.l) + 2.0 * x * (r - std::cos(x * p.l));
  };
  double hs = std::min(1e-4 / p.l, 0.25 * s);
  double dd_ds = (denom(s + hs) - denom(s - hs)) / (2.0 * hs);
  double dd = dd_ds / (2.0 * s);
  double q = e2 * lambda - p.gamma;
  double mass_a = -2.0 * s * (r - std::cos(s * p.l)) * q / dd;

  // (b) contour integral of 1/(1 + s) on a circle that excludes neighbouring roots
  double gap = 2.0 * s * kPi / p.l;
  double radius = std::min({1e-4 * std::max(1.0, lambda), 0.05 * gap, 0.5 * lambda});
  const int n = 64;
  Complex acc = 0.0;
  for (int k = 0; k < n; ++k) {
    Complex w = std::polar(radius, 2.0 * kPi * (k + 0.5) / n);
    Complex f;
    try {
      f = cayley_kernel(p, lambda + w, 0.0);
    } catch (const Error& e) {
      throw Error(ErrorKind::OracleDisagreement, std::string("contour hits a singular point: ") + e.what());
    }
    acc += f * w;
  }
  Complex mass_b = -2.0 * kI * acc / double(n);

  double floor = 1e-9 * std::max(1.0, lambda);
  double scale = std::max(std::abs(mass_a), std::abs(mass_b));
  if (std::abs(mass_a - mass_b) > 1e-6 * scale + floor || std::abs(mass_b.imag()) > 1e-6 * scale + floor)
    throw Error(ErrorKind::OracleDisagreement,
                "residue estimates disagree at lambda = " + describe(lambda) + ": " + describe(mass_a) +
                    " vs " + describe(mass_b.real()));
  ResidueEstimate est;
  est.by_denominator = mass_a;
  est.by_contour = mass_b.real();
  est.mass = std::abs(mass_b.real()) <= floor ? 0.0 : mass_b.real();
  return est;
}

double residue_oracle(const ModelParams& p, double lambda) { return residue_estimate(p, lambda).mass; }

double secular_function(const ModelParams& p, double lambda) {
  double k = std::sqrt(lambda);
  Complex rho = p.omega * std::exp(Complex(0.0, -p.tau * p.l));
  Complex a = 1.0 - rho * std::exp(Complex(0.0, k * p.l));
  Complex b = 1.0 - rho * std::exp(Complex(0.0, -k * p.l));
  double eta = p.eta;
  Eigen::Matrix3cd m;
  m << a, b, 0.0,
       eta, eta, -1.0,
       -kI * k * a / eta, kI * k * b / eta, p.gamma / (eta * eta) - lambda;
  return std::real(m.determinant() / (kI * rho)) * eta / 2.0;
}

std::vector<double> secular_roots(const ModelParams& p, double lambda_max) {
  double h = scan_step(p);
  double s_max = std::sqrt(lambda_max);
  auto n = static_cast<std::size_t>(std::ceil(s_max / h));
  auto f = [&](double s) { return secular_function(p, s * s); };
  std::vector<double> out;
  double sa = h * 1e-3, va = f(sa);
  for (std::size_t i = 1; i <= n; ++i) {
    double sb = std::min(double(i) * h, s_max);
    double vb = f(sb);
    if (vb == 0.0) {
      out.push_back(sb * sb);
    } else if (va != 0.0 && (va < 0.0) != (vb < 0.0)) {
      boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
      std::uintmax_t iters = 200;
      auto r = boost::math::tools::toms748_solve(f, sa, sb, va, vb, tol, iters);
      double root = 0.5 * (r.first + r.second);
      out.push_back(root * root);
    }
    sa = sb;
    va = vb;
  }
  return out;
}

StateVector reference_vector(const ModelParams& p, std::shared_ptr<const QuadratureGrid> grid) {
  // e^{i phi x}(1 + x(l - x)/l^2), eta u(0) as scalar part
  double l = p.l;
  Complex rate(0.0, -std::arg(p.omega) / l);
  ExpPoly u = ExpPoly::exponential(1.0, rate) + ExpPoly::term(1.0 / l, 1, rate) +
              ExpPoly::term(-1.0 / (l * l), 2, rate);
  StateVector e = StateVector::from_function(std::move(grid), u, p.eta);
  return e * Complex(1.0 / e.norm());
}

ModelVector embed(const ModelParams& p, const StateVector& v, std::shared_ptr<const ClarkMeasure> m) {
  ModelVector out;
  out.values.reserve(m->atoms.size());
  const ExpPoly& f = v.descriptor();
  const double c = -1.0 / std::sqrt(kPi);
  for (const Atom& a : m->atoms) out.values.push_back(c * dissipative_gamma0(p, a.lambda, f, v.scalar(), +1));
  out.measure = std::move(m);
  return out;
}

Complex model_inner(const ModelVector& g, const ModelVector& f) {
  const auto& atoms = g.measure->atoms;
  Complex sum = 0.0;
  for (std::size_t j = atoms.size(); j-- > 0;) sum += g.values[j] * std::conj(f.values[j]) * atoms[j].mass;
  return kPi * sum;
}

Complex model_resolvent(const ClarkMeasure& m, Complex z, const ModelVector& g, const ModelVector& f,
                        double collision_tol) {
  if (g.values.size() != m.atoms.size() || f.values.size() != m.atoms.size())
    throw Error(ErrorKind::InvalidParams, "model vector length differs from atom count");
  Complex sum = 0.0;
  for (std::size_t j = m.atoms.size(); j-- > 0;) {
    Complex d = m.atoms[j].lambda - z;
    if (std::abs(d) < collision_tol * std::max(1.0, std::abs(z)))
      throw Error(ErrorKind::AtomCollision, "z coincides with atom " + describe(m.atoms[j].lambda));
    sum += g.values[j] * std::conj(f.values[j]) * m.atoms[j].mass / d;
  }
  return kPi * sum;
}

double reference_tail_defect(const ModelParams& p, std::shared_ptr<const ClarkMeasure> m) {
  StateVector e = reference_vector(p, QuadratureGrid::make(p.l));
  ModelVector g = embed(p, e, std::move(m));
  return std::abs(std::pow(e.norm(), 2) - model_inner(g, g));
}

ClarkMeasure build_measure(const ModelParams& p, double lambda_max, MeasureOptions opts) {
  p.validate();
  auto m = std::make_shared<ClarkMeasure>();
  m->params = p;
  m->lambda_max = lambda_max;
  for (double lam : find_roots(p, lambda_max, opts.step_factor)) {
    double mass;
    if (!is_degenerate_root(p, lam)) {
      mass = atom_mass(p, lam);
      if (!(mass > 0.0))
        throw Error(ErrorKind::OracleDisagreement, "nonpositive mass at lambda = " + describe(lam));
    } else {
      mass = residue_estimate(p, lam).mass;
      if (mass == 0.0) {
        ++m->dropped_roots;
        continue;
      }
      if (mass < 0.0)
        throw Error(ErrorKind::OracleDisagreement, "negative residue at lambda = " + describe(lam));
    }
    m->atoms.push_back({lam, mass});
  }
  if (opts.compute_tail) m->tail_defect = reference_tail_defect(p, m);
  return *m;
}

double default_lambda_max(const ModelParams& p, double target) {
  for (double n = 16.0; n <= 65536.0; n *= 2.0) {
    double lam = std::pow(n * kPi / p.l, 2);
    ClarkMeasure m = build_measure(p, lam);
    if (m.tail_defect < target) return lam;
  }
  throw Error(ErrorKind::DiscretisationNotConverged, "no admissible lambda_max found");
}

Complex measure_transform(const ClarkMeasure& m, Complex z) {
  Complex sum = 0.0;
  for (std::size_t j = m.atoms.size(); j-- > 0;) {
    double lam = m.atoms[j].lambda;
    sum += m.atoms[j].mass * (1.0 + z * lam) / ((lam - z) * (1.0 + lam * lam));
  }
  return -0.5 * kI * sum;
}

NevanlinnaFit nevanlinna_fit(const ModelParams& p, const ClarkMeasure& m, const std::vector<Complex>& grid,
                             const std::vector<Complex>& holdout) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (n < 2) throw Error(ErrorKind::IllConditionedFit, "fit grid needs at least two points");
  Eigen::MatrixXcd x(n, 2);
  Eigen::VectorXcd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex z = grid[i];
    x(i, 0) = 1.0;
    x(i, 1) = z;
    y(i) = cayley_kernel(p, z) - measure_transform(m, z);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  auto sv = svd.singularValues();
  if (!(sv(1) > 0.0) || sv(0) / sv(1) > 1e12) throw Error(ErrorKind::IllConditionedFit, "degenerate fit grid");
  Eigen::VectorXcd c = svd.solve(y);
  NevanlinnaFit fit{c(0), c(1), 0.0};
  for (Complex z : holdout) {
    Complex r = cayley_kernel(p, z) - measure_transform(m, z) - fit.c0 - fit.c1 * z;
    fit.residual = std::max(fit.residual, std::abs(r));
  }
  return fit;
}

PoissonCheck poisson_identity_check(const ModelParams& p, const ClarkMeasure& m, double t, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidParams, "delta must be positive");
  PoissonCheck out;
  out.lhs = cayley_kernel(p, Complex(t, delta)) - cayley_kernel(p, Complex(t, -delta));
  double sum = 0.0;
  for (std::size_t j = m.atoms.size(); j-- > 0;) {
    double d = m.atoms[j].lambda - t;
    sum += m.atoms[j].mass * delta / (d * d + delta * delta);
  }
  out.rhs = sum;
  return out;
}

}  // namespace nsmodel
