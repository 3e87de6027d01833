#include "nsmodel/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace nsmodel {

namespace {

void dump(const Json& j, int indent, int depth, std::string& out) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<size_t>(d * indent), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        newline(depth + 1);
        dump(j[i], indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump(j, indent, 0, out);
  out += '\n';
  return out;
}

Json params_json(const ModelParams& p) {
  Json j;
  j["l"] = p.l;
  j["eta"] = p.eta;
  j["gamma"] = p.gamma;
  j["omega_re"] = p.omega.real();
  j["omega_im"] = p.omega.imag();
  j["tau"] = p.tau;
  return j;
}

Json measure_json(const ClarkMeasure& m) {
  Json j;
  j["params"] = params_json(m.params);
  j["lambda_max"] = m.lambda_max;
  j["tail_defect"] = m.tail_defect;
  Json atoms = Json::array();
  for (const Atom& a : m.atoms) {
    Json aj;
    aj["lambda"] = a.lambda;
    aj["mass"] = a.mass;
    atoms.push_back(aj);
  }
  j["atoms"] = atoms;
  return j;
}

std::string measure_csv(const ClarkMeasure& m) {
  std::string out = "lambda,mass\n";
  for (const Atom& a : m.atoms) out += format_double(a.lambda) + "," + format_double(a.mass) + "\n";
  return out;
}

std::string sweep_csv(const SweepResult& s) {
  std::string out = "eps,theta,z_re,z_im,resolvent_error,eig_error\n";
  for (const SweepRow& r : s.rows)
    out += format_double(r.eps) + "," + format_double(s.theta) + "," + format_double(s.z.real()) + "," +
           format_double(s.z.imag()) + "," + format_double(r.resolvent_error) + "," +
           format_double(r.eig_error) + "\n";
  return out;
}

Json sweep_json(const SweepResult& s) {
  auto fit = [](const RateFit& f) {
    Json j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["residual"] = f.residual;
    j["monotone"] = f.monotone;
    return j;
  };
  Json j;
  j["cell"] = {{"l1", s.cell.l1}, {"l2", s.cell.l2}, {"l3", s.cell.l3}, {"a1", s.cell.a1}, {"a3", s.cell.a3}};
  j["theta"] = s.theta;
  j["z_re"] = s.z.real();
  j["z_im"] = s.z.imag();
  j["resolvent_fit"] = fit(s.resolvent_fit);
  j["eig_fit"] = fit(s.eig_fit);
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidParams, "cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error(ErrorKind::InvalidParams, "write to " + path + " failed");
}

}  // namespace nsmodel
