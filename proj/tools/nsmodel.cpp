#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "nsmodel/clark.hpp"
#include "nsmodel/graph.hpp"
#include "nsmodel/io.hpp"
#include "nsmodel/sampling.hpp"
#include "nsmodel/verify.hpp"

using namespace nsmodel;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAnalytic = 3;
constexpr int kExitNumerical = 4;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidParams:
      return kExitUsage;
    case ErrorKind::PoleProximity:
    case ErrorKind::DenominatorVanishing:
    case ErrorKind::SingularNormalisation:
    case ErrorKind::SpectralPoint:
    case ErrorKind::DomainViolation:
    case ErrorKind::AtomCollision:
    case ErrorKind::DegenerateXi:
    case ErrorKind::ZeroGamma:
      return kExitAnalytic;
    default:
      return kExitNumerical;
  }
}

struct ParamFlags {
  double l = kPi, eta = 1.0, gamma = 1.0, omega_arg = kPi / 3, tau = 0.0;

  void add(CLI::App* app, bool required) {
    auto opt = [&](const char* name, double& v, const char* help) {
      auto* o = app->add_option(name, v, help);
      if (required) o->required();
    };
    opt("--l", l, "interval length");
    opt("--eta", eta, "coupling eta (nonzero)");
    opt("--gamma", gamma, "gamma > 0");
    opt("--omega-arg", omega_arg, "argument of omega in radians");
    opt("--tau", tau, "quasimomentum in [-pi, pi)");
  }
  ModelParams params() const { return ModelParams::make(l, eta, gamma, omega_arg, tau); }
};

Complex parse_complex(const std::string& s) {
  std::istringstream in(s);
  double re = 0.0, im = 0.0;
  char comma = 0;
  in >> re;
  if (!in) throw Error(ErrorKind::InvalidParams, "cannot parse complex value '" + s + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw Error(ErrorKind::InvalidParams, "cannot parse complex value '" + s + "'");
  }
  std::string rest;
  if (in >> rest) throw Error(ErrorKind::InvalidParams, "trailing characters in '" + s + "'");
  return {re, im};
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") std::cout << content;
  else write_file(path, content);
}

std::string complex_cols(Complex z) { return format_double(z.real()) + "," + format_double(z.imag()); }

int cmd_mfun(const ParamFlags& pf, const std::vector<std::string>& zs, double eps_pole, const std::string& format) {
  ModelParams p = pf.params();
  std::vector<Complex> pts;
  for (const auto& s : zs) pts.push_back(parse_complex(s));
  Json rows = Json::array();
  std::string csv = "z_re,z_im,m_re,m_im,s_re,s_im\n";
  for (Complex z : pts) {
    Complex m = weyl_m(p, z, eps_pole);
    Complex s = characteristic_s(p, z, eps_pole);
    csv += complex_cols(z) + "," + complex_cols(m) + "," + complex_cols(s) + "\n";
    rows.push_back(Json{{"z_re", z.real()}, {"z_im", z.imag()}, {"m_re", m.real()}, {"m_im", m.imag()},
                        {"s_re", s.real()}, {"s_im", s.imag()}});
  }
  std::cout << (format == "json" ? dump_json(Json{{"params", params_json(p)}, {"values", rows}}) : csv);
  return kExitOk;
}

int cmd_measure(const ParamFlags& pf, std::optional<double> lambda_max, const std::string& format,
                const std::string& output) {
  ModelParams p = pf.params();
  double lmax = lambda_max ? *lambda_max : default_lambda_max(p);
  MeasureOptions opts;
  for (int attempt = 0;; ++attempt) {
    try {
      ClarkMeasure m = build_measure(p, lmax, opts);
      emit(output, format == "csv" ? measure_csv(m) : dump_json(measure_json(m)));
      return kExitOk;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ScanResolutionExceeded || attempt == 2) throw;
      std::cerr << e.what() << "; retrying with scan step factor " << opts.step_factor / 2 << "\n";
      opts.step_factor /= 2;
    }
  }
}

int cmd_verify(const VerifyOptions& opts, const std::string& output) {
  auto suites = run_verify(opts);
  emit(output, dump_json(verify_report(opts, suites)));
  bool ok = true;
  for (const auto& s : suites)
    for (const auto& c : s.checks)
      if (!c.passed) {
        ok = false;
        std::cerr << "FAIL " << s.name << "/" << c.name << " residual " << format_double(c.residual)
                  << " tolerance " << format_double(c.tolerance) << "\n";
      }
  return ok ? kExitOk : kExitNumerical;
}

int cmd_homog(const GraphCell& c, double theta, const std::string& zs, const std::vector<double>& eps, bool eig_only,
              double slope_min, double slope_max, const std::string& csv_path, const std::string& summary_path) {
  if (eps.size() < 3) throw Error(ErrorKind::InvalidParams, "--eps needs at least 3 values");
  SweepResult s = convergence_sweep(c, theta, parse_complex(zs), eps, eig_only);
  Json summary = sweep_json(s);
  auto in_band = [&](double x) { return x >= slope_min && x <= slope_max; };
  bool ok = in_band(s.eig_fit.slope) && (eig_only || in_band(s.resolvent_fit.slope));
  summary["slope_band"] = {slope_min, slope_max};
  summary["passed"] = ok;
  if (!csv_path.empty()) write_file(csv_path, sweep_csv(s));
  else std::cout << sweep_csv(s);
  emit(summary_path, dump_json(summary));
  return ok ? kExitOk : kExitNumerical;
}

int cmd_resolvent_compare(const ParamFlags& pf, const std::string& zs, std::uint64_t seed, int pairs,
                          std::optional<double> lambda_max, const std::string& output) {
  ModelParams p = pf.params();
  Complex z = parse_complex(zs);
  if (z.imag() == 0.0) throw Error(ErrorKind::InvalidParams, "z must be nonreal");
  double lmax = lambda_max ? *lambda_max : default_lambda_max(p);
  auto m = std::make_shared<const ClarkMeasure>(build_measure(p, lmax));
  auto grid = QuadratureGrid::make(p.l);
  Rng gen(seed);
  std::string csv = "pair,direct_re,direct_im,model_re,model_im,abs_diff,tail_defect\n";
  for (int i = 0; i < pairs; ++i) {
    auto draw = [&] {
      StateVector s = dilation_domain_state(p, grid, to_max_domain(p, random_trig_poly(gen, p.l)));
      return s * Complex(1.0 / s.norm());
    };
    StateVector u = draw(), v = draw();
    Complex direct = inner(dilation_resolvent(p, z, u), v);
    Complex model = model_resolvent(*m, z, embed(p, u, m), embed(p, v, m));
    csv += std::to_string(i) + "," + complex_cols(direct) + "," + complex_cols(model) + "," +
           format_double(std::abs(direct - model)) + "," + format_double(m->tail_defect) + "\n";
  }
  emit(output, csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-triple functional model: m-functions, Clark measures, homogenisation checks"};
  app.require_subcommand(1);

  ParamFlags mf_params, me_params, rc_params;
  std::vector<std::string> mf_z;
  double mf_eps_pole = kDefaultEpsPole;
  std::string mf_format = "csv";
  auto* mfun = app.add_subcommand("mfun", "evaluate m(z) and s(z)");
  mf_params.add(mfun, true);
  mfun->add_option("--z", mf_z, "points as re,im (repeatable)")->required();
  mfun->add_option("--eps-pole", mf_eps_pole, "relative pole guard");
  mfun->add_option("--format", mf_format)->check(CLI::IsMember({"csv", "json"}));

  std::optional<double> me_lmax;
  std::string me_format = "json", me_output;
  auto* measure = app.add_subcommand("measure", "build the Clark measure");
  me_params.add(measure, false);
  measure->add_option("--lambda-max", me_lmax, "truncation (default: tail defect < 1e-12)");
  measure->add_option("--format", me_format)->check(CLI::IsMember({"csv", "json"}));
  measure->add_option("--output,-o", me_output, "output file (default stdout)");

  VerifyOptions vopts;
  std::vector<std::string> v_tol;
  std::string v_output;
  auto* verify = app.add_subcommand("verify", "run the seeded verification suites");
  verify->add_option("--seed", vopts.seed);
  verify->add_option("--tol-scale", vopts.tol_scale, "multiplies every tolerance");
  verify->add_option("--tol", v_tol, "suite/check=value (repeatable)");
  verify->add_option("--output,-o", v_output, "report file (default stdout)");

  GraphCell cell;
  double theta = 1.0, slope_min = 1.8, slope_max = 2.2;
  std::string h_z = "2,1", h_csv, h_summary;
  std::vector<double> h_eps = {0.1, 0.05, 0.025, 0.0125};
  bool eig_only = false;
  auto* homog = app.add_subcommand("homog", "eps^2 convergence sweep on the three-edge cell");
  homog->add_option("--l1", cell.l1);
  homog->add_option("--l2", cell.l2);
  homog->add_option("--l3", cell.l3);
  homog->add_option("--a1", cell.a1);
  homog->add_option("--a3", cell.a3);
  homog->add_option("--theta", theta, "tau / eps");
  homog->add_option("--z", h_z, "spectral parameter re,im");
  homog->add_option("--eps", h_eps, "decreasing eps list")->delimiter(',');
  homog->add_flag("--eig-only", eig_only, "skip the resolvent-norm path");
  homog->add_option("--slope-min", slope_min);
  homog->add_option("--slope-max", slope_max);
  homog->add_option("--csv", h_csv, "CSV file (default stdout)");
  homog->add_option("--summary", h_summary, "JSON summary file (default stdout)");

  std::string rc_z = "2,1", rc_output;
  std::uint64_t rc_seed = 42;
  int rc_pairs = 10;
  std::optional<double> rc_lmax;
  auto* rcomp = app.add_subcommand("resolvent-compare", "direct resolvent vs the model multiplication operator");
  rc_params.add(rcomp, false);
  rcomp->add_option("--z", rc_z);
  rcomp->add_option("--seed", rc_seed);
  rcomp->add_option("--pairs", rc_pairs)->check(CLI::PositiveNumber);
  rcomp->add_option("--lambda-max", rc_lmax);
  rcomp->add_option("--output,-o", rc_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*mfun) return cmd_mfun(mf_params, mf_z, mf_eps_pole, mf_format);
    if (*measure) return cmd_measure(me_params, me_lmax, me_format, me_output);
    if (*verify) {
      for (const auto& t : v_tol) {
        auto eq = t.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::InvalidParams, "--tol expects suite/check=value");
        vopts.overrides[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
      }
      return cmd_verify(vopts, v_output);
    }
    if (*homog) return cmd_homog(cell, theta, h_z, h_eps, eig_only, slope_min, slope_max, h_csv, h_summary);
    if (*rcomp) return cmd_resolvent_compare(rc_params, rc_z, rc_seed, rc_pairs, rc_lmax, rc_output);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
