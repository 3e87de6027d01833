#include "doctest.h"
#include "nsmodel/bvp.hpp"
#include "nsmodel/sampling.hpp"

using namespace nsmodel;

namespace {

StateVector random_max_state(const ModelParams& p, std::shared_ptr<const QuadratureGrid> grid,
                             Rng& gen) {
  ExpPoly u = to_max_domain(p, random_trig_poly(gen, p.l));
  return StateVector::from_function(grid, u, random_complex(gen));
}

StateVector random_domain_state(const ModelParams& p, std::shared_ptr<const QuadratureGrid> grid,
                                Rng& gen) {
  return dilation_domain_state(p, grid, to_max_domain(p, random_trig_poly(gen, p.l)));
}

// residual of -d_tau^2 u - z u - f at a few points
double ode_residual(const ModelParams& p, Complex z, const ExpPoly& u, const ExpPoly& f) {
  ExpPoly r = d_tau(d_tau(u, p.tau), p.tau) * Complex(-1.0) - u * z - f;
  double m = 0.0;
  for (int i = 0; i <= 16; ++i) m = std::max(m, std::abs(r(p.l * i / 16.0)));
  return m;
}

}  // namespace

TEST_CASE("D operator examples") {
  auto grid = QuadratureGrid::make(kPi);
  ModelParams p = ModelParams::make(kPi, 1.0, 1.0, 0.7, 0.4);
  CHECK(std::abs(d_operator(p, StateVector::from_function(
                                   grid, ExpPoly::exponential(1.0, Complex(0.0, -0.4)), 0.0))) < 1e-14);
  ModelParams q = ModelParams::make(kPi, 1.0, 1.0, 0.0, 0.0);
  CHECK(std::abs(d_operator(q, StateVector::from_function(grid, ExpPoly::monomial(1.0, 1), 0.0))) < 1e-14);
  ExpPoly sinx = (ExpPoly::exponential(1.0, kI) - ExpPoly::exponential(1.0, -kI)) * (1.0 / (2.0 * kI));
  CHECK(std::abs(d_operator(q, StateVector::from_function(grid, sinx, 0.0)) - 2.0) < 1e-14);
  StateVector samples_only = StateVector::from_samples(grid, std::vector<Complex>(grid->order()), 0.0);
  try {
    d_operator(q, samples_only);
    FAIL("expected MissingDerivativeData");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingDerivativeData);
  }
}

TEST_CASE("boundary maps examples") {
  auto grid = QuadratureGrid::make(kPi);
  ModelParams p = ModelParams::make(kPi, 2.0, 1.0, 0.0, 0.0);
  BoundaryPair b = boundary_maps(p, StateVector::from_function(grid, ExpPoly::constant(1.0), 2.0));
  CHECK(std::abs(b.g0) < 1e-15);
  CHECK(std::abs(b.g1) < 1e-15);
  ModelParams q = ModelParams::make(kPi, 1.0, 1.0, 0.0, 0.0);
  b = boundary_maps(q, StateVector::from_function(grid, ExpPoly::constant(1.0), 0.0));
  CHECK(std::abs(b.g0) < 1e-15);
  CHECK(std::abs(b.g1 + 1.0) < 1e-15);
  try {
    boundary_maps(q, StateVector::from_function(grid, ExpPoly::monomial(1.0, 1), 0.0));
    FAIL("expected DomainViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainViolation);
  }
}

TEST_CASE("Weyl solution examples") {
  ModelParams p = ModelParams::make(kPi, 1.0, 2.0, 0.0, 0.0);
  WeylSolution w = weyl_solution(p, 0.25);
  CHECK(std::abs(w.du - 1.0) < 1e-14);
  CHECK(std::abs(w.c1 + w.c2 - 1.0) < 1e-14);
  ExpPoly u = w.function(p);
  for (double x : {0.0, 0.5, 1.9, kPi})
    CHECK(std::abs(u(x) - (std::sin(x / 2) + std::cos(x / 2))) < 1e-14);
  try {
    weyl_solution(p, 1.0);
    FAIL("expected SingularNormalisation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularNormalisation);
  }
}

TEST_CASE("Weyl solution reproduces the M-function through the boundary maps") {
  Rng gen(5);
  for (int n = 0; n < 50; ++n) {
    ModelParams p = random_params(gen);
    Complex z(uniform(gen, -10.0, 40.0), uniform(gen, 0.05, 5.0));
    if (uniform(gen, 0, 1) < 0.5) z = std::conj(z);
    auto grid = QuadratureGrid::make(p.l);
    WeylSolution w = weyl_solution(p, z);
    ExpPoly u = w.function(p);
    CHECK(std::abs(u(0.0) - 1.0) < 1e-12);
    CHECK(std::abs(p.omega * u(p.l) - 1.0) < 1e-12);
    StateVector s = w.state(p, grid);
    BoundaryPair b = boundary_maps(p, s);
    CHECK(std::abs(b.g0 - w.du) < 1e-10 * std::max(1.0, std::abs(w.du)));
    Complex m = weyl_m(p, z);
    CHECK(std::abs(b.g1 / b.g0 - m) < 1e-10 * std::max(1.0, std::abs(m)));
    // u_z solves the homogeneous equation
    CHECK(ode_residual(p, z, u, ExpPoly()) < 1e-10 * std::max(1.0, std::abs(z)));
  }
}

TEST_CASE("Green's identity") {
  Rng gen(9);
  for (int draw = 0; draw < 10; ++draw) {
    ModelParams p = random_params(gen);
    auto grid = QuadratureGrid::make(p.l);
    for (int n = 0; n < 10; ++n) {
      StateVector a = random_max_state(p, grid, gen);
      StateVector b = random_max_state(p, grid, gen);
      CHECK(greens_identity_defect(p, a, b) < 1e-9);
      CHECK(greens_identity_defect(p, a, a) < 1e-9);
    }
    StateVector m = dilation_domain_state(p, grid, to_min_domain(p, random_trig_poly(gen, p.l)));
    BoundaryPair bm = boundary_maps(p, m);
    CHECK(std::abs(bm.g0) < 1e-12);
    CHECK(std::abs(bm.g1) < 1e-12);
    StateVector s = random_max_state(p, grid, gen);
    CHECK(std::abs(inner(apply_a_max(p, m), s) - inner(m, apply_a_max(p, s))) < 1e-9);
  }
  ModelParams p = ModelParams::make(2.0, 0.8, 1.3, kPi / 5.0, 0.3);
  auto grid = QuadratureGrid::make(p.l);
  CHECK(greens_identity_defect(p, random_max_state(p, grid, gen), random_max_state(p, grid, gen)) < 1e-9);
}

TEST_CASE("quadratic form is nonnegative") {
  Rng gen(10);
  for (int n = 0; n < 100; ++n) {
    ModelParams p = random_params(gen);
    auto grid = QuadratureGrid::make(p.l);
    StateVector s = random_domain_state(p, grid, gen);
    Complex form = inner(apply_a_max(p, s), s);
    ExpPoly du = d_tau(s.descriptor(), p.tau);
    double energy = std::real((du * du.conj()).integral(0.0, p.l, p.l)) +
                    p.gamma * std::norm(s.descriptor()(0.0));
    CHECK(std::abs(form - energy) < 1e-9 * std::max(1.0, energy));
    CHECK(energy >= 0.0);
  }
}

TEST_CASE("generalized resolvent") {
  Rng gen(12);
  ModelParams p = ModelParams::make(kPi, 1.0, 1.0, kPi / 3.0, 0.0);
  auto grid = QuadratureGrid::make(p.l);
  Complex z(2.0, 1.0);
  CHECK(generalized_resolvent(p, z, ExpPoly()).terms().empty());

  ExpPoly one = ExpPoly::constant(1.0);
  ExpPoly u = generalized_resolvent(p, z, one);
  StateVector d = dilation_resolvent(p, z, StateVector::from_function(grid, one, 0.0));
  for (double x : {0.0, 1.0, 2.5, kPi}) CHECK(std::abs(u(x) - d.descriptor()(x)) < 1e-9);

  for (int n = 0; n < 50; ++n) {
    ModelParams q = random_params(gen);
    auto g = QuadratureGrid::make(q.l);
    Complex zz(uniform(gen, 1.0, 3.0), uniform(gen, 0.5, 1.5));
    if (n % 2) zz = std::conj(zz);
    ExpPoly f = random_trig_poly(gen, q.l);
    ExpPoly h = random_trig_poly(gen, q.l);
    ExpPoly rf = generalized_resolvent(q, zz, f);
    CHECK(ode_residual(q, zz, rf, f) < 1e-9);
    CHECK(std::abs(rf(0.0) - q.omega * rf(q.l)) < 1e-10);
    ExpPoly drf = d_tau(rf, q.tau);
    Complex du = drf(0.0) - q.omega * drf(q.l);
    CHECK(std::abs(du - (q.gamma - q.eta * q.eta * zz) * rf(0.0)) < 1e-9);

    StateVector sf = StateVector::from_function(g, f, 0.0);
    StateVector sh = StateVector::from_function(g, h, 0.0);
    StateVector rs = generalized_resolvent(q, zz, sf);
    StateVector rd = dilation_resolvent(q, zz, sf);
    StateVector rd_f = StateVector::from_function(g, rd.descriptor(), 0.0);
    CHECK((rs - rd_f).norm() < 1e-8 * rs.norm());
    Complex lhs = inner(rs, sh);
    Complex rhs = std::conj(inner(generalized_resolvent(q, std::conj(zz), sh), sf));
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("dilation resolvent") {
  Rng gen(13);
  for (int n = 0; n < 30; ++n) {
    ModelParams p = random_params(gen);
    auto grid = QuadratureGrid::make(p.l);
    Complex z(uniform(gen, -2.0, 10.0), uniform(gen, 0.2, 3.0));
    if (n % 2) z = std::conj(z);
    StateVector s = random_domain_state(p, grid, gen);
    StateVector rhs = apply_a_max(p, s) - s * z;
    StateVector back = dilation_resolvent(p, z, rhs);
    CHECK((back - s).norm() < 1e-9 * std::max(1.0, s.norm()));

    StateVector f = StateVector::from_function(grid, random_trig_poly(gen, p.l), random_complex(gen));
    StateVector r = dilation_resolvent(p, z, f);
    // r lies in dom(A) and solves the system
    CHECK(std::abs(r.scalar() - p.eta * r.descriptor()(0.0)) < 1e-10 * std::max(1.0, std::abs(r.scalar())));
    StateVector res = apply_a_max(p, r) - r * z - f;
    CHECK(res.norm() < 1e-9 * std::max(1.0, f.norm()));
    CHECK(std::imag(inner(r, f)) * z.imag() > 0.0);

    Complex z2 = z + Complex(1.5, 0.3);
    StateVector r2 = dilation_resolvent(p, z2, f);
    StateVector lhs = r - r2;
    StateVector rhs2 = dilation_resolvent(p, z, r2) * (z - z2);
    CHECK((lhs - rhs2).norm() < 1e-9 * std::max(1.0, lhs.norm()));
  }
}

TEST_CASE("dilation resolvent at an eigenvalue is refused") {
  ModelParams p = ModelParams::make(kPi, 1.0, 1.0, 0.0, 0.0);
  auto grid = QuadratureGrid::make(p.l);
  // lambda = 4: sin(2 pi) = 0 and cos(2 pi) = 1 = Re(omega), an eigenvalue of the dilation
  try {
    dilation_resolvent(p, 4.0, StateVector::from_function(grid, ExpPoly::constant(1.0), 0.0));
    FAIL("expected SpectralPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SpectralPoint);
  }
}

TEST_CASE("dissipative resolvent") {
  Rng gen(14);
  for (int n = 0; n < 30; ++n) {
    ModelParams p = random_params(gen);
    auto grid = QuadratureGrid::make(p.l);
    double lambda = uniform(gen, 0.1, 50.0);
    StateVector zero = dissipative_resolvent(p, lambda, StateVector::from_function(grid, ExpPoly(), 0.0), +1);
    CHECK(zero.norm() < 1e-15);

    StateVector f = StateVector::from_function(grid, random_trig_poly(gen, p.l), random_complex(gen));
    StateVector g = StateVector::from_function(grid, random_trig_poly(gen, p.l), random_complex(gen));
    for (int sign : {+1, -1}) {
      StateVector w = dissipative_resolvent(p, lambda, f, sign);
      StateVector res = apply_a_max(p, w) - w * lambda - f;
      CHECK(res.norm() < 1e-9 * std::max(1.0, f.norm()));
      BoundaryPair b = boundary_maps(p, w);
      CHECK(std::abs(b.g1 - double(sign) * kI * b.g0) < 1e-10 * std::max(1.0, std::abs(b.g0)));
      CHECK(std::abs(dissipative_gamma0(p, lambda, f.descriptor(), f.scalar(), sign) - b.g0) <
            1e-10 * std::max(1.0, std::abs(b.g0)));
    }
    Complex lhs = inner(dissipative_resolvent(p, lambda, f, +1), g);
    Complex rhs = std::conj(inner(dissipative_resolvent(p, lambda, g, -1), f));
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("grid dilation resolvent converges to the exact one") {
  ModelParams p = ModelParams::make(0.5, std::sqrt(0.5), 2.0, 0.3, 0.1);
  auto grid = QuadratureGrid::make(p.l);
  Complex z(2.0, 1.0);
  ExpPoly f = ExpPoly::exponential(1.0, Complex(0.0, 3.0)) + ExpPoly::monomial(0.5, 1);
  StateVector exact = dilation_resolvent(p, z, StateVector::from_function(grid, f, 0.7));
  double prev = 0.0;
  for (int m : {50, 100, 200}) {
    GridDilationResolvent g(p, z, m);
    std::vector<Complex> fc(m), u;
    for (int j = 0; j < m; ++j) fc[j] = f((j + 0.5) * g.cell_width());
    Complex beta;
    g.apply(fc, 0.7, u, beta);
    double err = std::abs(beta - exact.scalar());
    for (int j = 0; j < m; ++j) err = std::max(err, std::abs(u[j] - exact.descriptor()((j + 0.5) * g.cell_width())));
    if (prev > 0.0) CHECK(err < 0.3 * prev);
    prev = err;
  }
  CHECK(prev < 1e-4);
}
