#include "nsmodel/verify.hpp"

#include <algorithm>
#include <cmath>

#include "nsmodel/sampling.hpp"

namespace nsmodel {

namespace {

StateVector random_max_state(const ModelParams& p, std::shared_ptr<const QuadratureGrid> grid, Rng& gen) {
  return StateVector::from_function(grid, to_max_domain(p, random_trig_poly(gen, p.l)), random_complex(gen));
}

StateVector random_unit_domain_state(const ModelParams& p, std::shared_ptr<const QuadratureGrid> grid, Rng& gen) {
  StateVector s = dilation_domain_state(p, grid, to_max_domain(p, random_trig_poly(gen, p.l)));
  return s * Complex(1.0 / s.norm());
}

ModelParams generic_params() { return ModelParams::make(kPi, 1.0, 1.0, kPi / 3, 0.0); }
ModelParams second_params() { return ModelParams::make(2.0, 0.8, 0.5, 1.0, 0.6); }

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Check VerifyContext::check(const std::string& suite, const std::string& name, double residual,
                           double nominal) const {
  Check c;
  c.name = name;
  c.residual = residual;
  auto it = opts_.overrides.find(suite + "/" + name);
  c.tolerance = it != opts_.overrides.end() ? it->second : nominal * opts_.tol_scale;
  c.passed = std::isfinite(residual) && residual < c.tolerance;
  return c;
}

SuiteResult suite_boundary_triple(const VerifyContext& ctx) {
  SuiteResult s{"boundary_triple", {}, Json::object()};
  Rng gen(ctx.seed(1));
  double green = 0.0;
  int pairs = 0;
  for (int draw = 0; draw < 10; ++draw) {
    ModelParams p = random_params(gen);
    auto grid = QuadratureGrid::make(p.l);
    for (int n = 0; n < 10; ++n, ++pairs) {
      StateVector a = random_max_state(p, grid, gen), b = random_max_state(p, grid, gen);
      green = std::max(green, greens_identity_defect(p, a, b));
    }
  }
  double mrep = 0.0;
  for (int n = 0; n < 50; ++n) {
    ModelParams p = random_params(gen);
    Complex z(uniform(gen, -10.0, 40.0), uniform(gen, 0.05, 5.0));
    if (n % 2) z = std::conj(z);
    WeylSolution w = weyl_solution(p, z);
    BoundaryPair b = boundary_maps(p, w.state(p, QuadratureGrid::make(p.l)));
    Complex m = weyl_m(p, z);
    mrep = std::max(mrep, std::abs(b.g1 / b.g0 - m) / std::max(1.0, std::abs(m)));
  }
  s.checks.push_back(ctx.check(s.name, "greens_identity_defect", green, 1e-9));
  s.checks.push_back(ctx.check(s.name, "m_function_reproduction", mrep, 1e-10));
  s.info["pairs"] = pairs;
  return s;
}

SuiteResult suite_generalized_resolvent(const VerifyContext& ctx) {
  SuiteResult s{"generalized_resolvent", {}, Json::object()};
  Rng gen(ctx.seed(2));
  double worst = 0.0;
  for (int n = 0; n < 50; ++n) {
    ModelParams p = random_params(gen);
    auto grid = QuadratureGrid::make(p.l);
    Complex z(uniform(gen, 1.0, 3.0), uniform(gen, 0.5, 1.5));
    if (n % 2) z = std::conj(z);
    StateVector f = StateVector::from_function(grid, random_trig_poly(gen, p.l), 0.0);
    StateVector direct = generalized_resolvent(p, z, f);
    StateVector full = dilation_resolvent(p, z, f);
    StateVector compressed = StateVector::from_function(grid, full.descriptor(), 0.0);
    worst = std::max(worst, (direct - compressed).norm() / direct.norm());
  }
  s.checks.push_back(ctx.check(s.name, "compression_discrepancy", worst, 1e-8));
  return s;
}

SuiteResult suite_residue_oracle(const VerifyContext& ctx) {
  SuiteResult s{"residue_oracle", {}, Json::object()};
  Rng gen(ctx.seed(3));
  std::vector<ModelParams> sets = {generic_params(), ModelParams::make(kPi, 1.0, 1.0, 0.0, 0.0),
                                   second_params()};
  sets.push_back(random_params(gen));
  sets.push_back(random_params(gen));
  const double lambda_max = 1e4;
  double mass_rel = 0.0, secular = 0.0, unmatched = 0.0;
  int degenerate_dropped = 0, atoms = 0;
  for (size_t i = 0; i < sets.size(); ++i) {
    const ModelParams& p = sets[i];
    ClarkMeasure m = build_measure(p, lambda_max, {1.0, false});
    std::vector<double> sec = secular_roots(p, lambda_max);
    for (const Atom& a : m.atoms) {
      mass_rel = std::max(mass_rel, std::abs(a.mass - residue_oracle(p, a.lambda)) / a.mass);
      auto it = std::lower_bound(sec.begin(), sec.end(), a.lambda);
      double d = INFINITY;
      if (it != sec.end()) d = std::min(d, *it - a.lambda);
      if (it != sec.begin()) d = std::min(d, a.lambda - *(it - 1));
      secular = std::max(secular, d / std::max(1.0, a.lambda));
    }
    // every secular root is either an atom or a dropped removable point
    unmatched += std::abs(double(sec.size()) - double(m.atoms.size() + m.dropped_roots));
    if (i == 1) degenerate_dropped = m.dropped_roots;
    atoms += static_cast<int>(m.atoms.size());
  }
  s.checks.push_back(ctx.check(s.name, "mass_vs_oracle", mass_rel, 1e-6));
  s.checks.push_back(ctx.check(s.name, "atom_vs_secular_root", secular, 1e-9));
  s.checks.push_back(ctx.check(s.name, "unmatched_secular_roots", unmatched, 0.5));
  s.checks.push_back(ctx.check(s.name, "degenerate_set_keeps_removable_points",
                               degenerate_dropped > 0 ? 0.0 : 1.0, 0.5));
  s.info["atoms"] = atoms;
  s.info["dropped_in_degenerate_set"] = degenerate_dropped;
  return s;
}

SuiteResult suite_parseval(const VerifyContext& ctx) {
  SuiteResult s{"parseval", {}, Json::object()};
  Rng gen(ctx.seed(4));
  double excess = 0.0, tail = 0.0;
  for (const ModelParams& p : {generic_params(), second_params()}) {
    auto m = std::make_shared<const ClarkMeasure>(build_measure(p, default_lambda_max(p)));
    auto grid = QuadratureGrid::make(p.l);
    tail = std::max(tail, m->tail_defect);
    for (int n = 0; n < 10; ++n) {
      StateVector u = random_unit_domain_state(p, grid, gen), v = random_unit_domain_state(p, grid, gen);
      double defect = std::abs(inner(u, v) - model_inner(embed(p, u, m), embed(p, v, m)));
      excess = std::max(excess, defect - m->tail_defect);
    }
  }
  s.checks.push_back(ctx.check(s.name, "tail_defect", tail, 1e-6));
  s.checks.push_back(ctx.check(s.name, "defect_beyond_tail", std::max(excess, 0.0), 1e-8));
  return s;
}

SuiteResult suite_resolvent_diagonalisation(const VerifyContext& ctx) {
  SuiteResult s{"resolvent_diagonalisation", {}, Json::object()};
  Rng gen(ctx.seed(5));
  ModelParams p = generic_params();
  auto m = std::make_shared<const ClarkMeasure>(build_measure(p, default_lambda_max(p)));
  auto grid = QuadratureGrid::make(p.l);
  const Complex z(2.0, 1.0);
  double ratio = 0.0, worst = 0.0;
  for (int n = 0; n < 10; ++n) {
    StateVector u = random_unit_domain_state(p, grid, gen), v = random_unit_domain_state(p, grid, gen);
    Complex direct = inner(dilation_resolvent(p, z, u), v);
    double d = std::abs(direct - model_resolvent(*m, z, embed(p, u, m), embed(p, v, m)));
    worst = std::max(worst, d);
    ratio = std::max(ratio, d / m->tail_defect);
  }
  s.checks.push_back(ctx.check(s.name, "discrepancy_over_tail", ratio, 10.0));
  s.info["max_discrepancy"] = worst;
  s.info["tail_defect"] = m->tail_defect;
  return s;
}

std::vector<SuiteResult> suite_nevanlinna_poisson(const VerifyContext& ctx) {
  SuiteResult nev{"nevanlinna", {}, Json::object()}, poi{"poisson", {}, Json::object()};
  Rng gen(ctx.seed(6));
  ModelParams p = generic_params();
  ClarkMeasure m = build_measure(p, 4e12, {1.0, false});
  std::vector<Complex> grid, holdout;
  for (double x : {-2.0, 0.0, 1.5, 3.0, 6.0})
    for (double y : {0.5, 1.0, 2.0}) grid.push_back({x, y});
  for (int i = 0; i < 8; ++i) holdout.push_back({uniform(gen, -2.0, 8.0), uniform(gen, 0.3, 3.0)});
  NevanlinnaFit fit = nevanlinna_fit(p, m, grid, holdout);
  nev.checks.push_back(ctx.check(nev.name, "holdout_residual", fit.residual, 1e-6));
  nev.checks.push_back(ctx.check(nev.name, "linear_coefficient", std::abs(fit.c1), 1e-6));
  nev.info["c0_re"] = fit.c0.real();
  nev.info["c0_im"] = fit.c0.imag();
  nev.info["atoms"] = m.atoms.size();

  double diff = 0.0, imag = 0.0;
  for (int i = 0; i < 10; ++i) {
    double t = uniform(gen, -3.0, 12.0), delta = uniform(gen, 0.05, 1.0);
    PoissonCheck pc = poisson_identity_check(p, m, t, delta);
    diff = std::max(diff, std::abs(pc.lhs - pc.rhs));
    imag = std::max(imag, std::abs(pc.lhs.imag()));
  }
  poi.checks.push_back(ctx.check(poi.name, "identity_defect", diff, 1e-5));
  poi.checks.push_back(ctx.check(poi.name, "lhs_imaginary_part", imag, 1e-12));
  return {nev, poi};
}

std::vector<SuiteResult> run_verify(const VerifyOptions& opts) {
  VerifyContext ctx(opts);
  std::vector<SuiteResult> out;
  out.push_back(suite_boundary_triple(ctx));
  out.push_back(suite_generalized_resolvent(ctx));
  out.push_back(suite_residue_oracle(ctx));
  out.push_back(suite_parseval(ctx));
  out.push_back(suite_resolvent_diagonalisation(ctx));
  for (auto& r : suite_nevanlinna_poisson(ctx)) out.push_back(std::move(r));
  return out;
}

Json verify_report(const VerifyOptions& opts, const std::vector<SuiteResult>& suites) {
  Json j;
  j["seed"] = opts.seed;
  j["tol_scale"] = opts.tol_scale;
  bool all = true;
  Json arr = Json::array();
  for (const SuiteResult& s : suites) {
    Json sj;
    sj["name"] = s.name;
    sj["passed"] = s.passed();
    Json checks = Json::array();
    for (const Check& c : s.checks) {
      Json cj;
      cj["name"] = c.name;
      cj["residual"] = c.residual;
      cj["tolerance"] = c.tolerance;
      cj["passed"] = c.passed;
      checks.push_back(cj);
    }
    sj["checks"] = checks;
    sj["info"] = s.info;
    arr.push_back(sj);
    all = all && s.passed();
  }
  j["passed"] = all;
  j["suites"] = arr;
  return j;
}

}  // namespace nsmodel
