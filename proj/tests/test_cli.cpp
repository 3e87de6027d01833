#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(NSMODEL_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string tmp(const std::string& name) { return std::string(NSMODEL_TMP) + "/" + name; }

const char* kParams = "--l 3.14159265358979 --eta 1 --gamma 2 --omega-arg 0 --tau 0";

}  // namespace

TEST_CASE("mfun") {
  Run r = run(std::string("mfun ") + kParams + " --z 1,0");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "z_re,z_im,m_re,m_im,s_re,s_im");
  double zr, zi, mr, mi;
  REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf,%lf", &zr, &zi, &mr, &mi) == 4);
  CHECK(std::abs(mr - 1.0) < 1e-12);
  CHECK(std::abs(mi) < 1e-12);

  Run missing = run("mfun --l 3.14159265358979 --eta 1 --omega-arg 0 --tau 0 --z 1,0");
  CHECK(missing.code == 2);
  CHECK(missing.out.find("--gamma") != std::string::npos);

  Run pole = run(std::string("mfun ") + kParams + " --z 2,0");
  CHECK(pole.code == 3);
  CHECK(pole.out.find("eta^2 z - gamma") != std::string::npos);

  CHECK(run("mfun --l -1 --eta 1 --gamma 2 --omega-arg 0 --tau 0 --z 1,1").code == 2);
  CHECK(run(std::string("mfun ") + kParams + " --z 1,x").code == 2);
}

TEST_CASE("measure output") {
  Run r = run("measure --lambda-max 400 -o " + tmp("m400.json"));
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(slurp(tmp("m400.json")));
  for (const char* key : {"l", "eta", "gamma", "omega_re", "omega_im", "tau"}) CHECK(j["params"].contains(key));
  CHECK(j["lambda_max"].get<double>() == 400.0);
  auto atoms = j["atoms"];
  REQUIRE(atoms.size() > 5);
  for (size_t i = 0; i < atoms.size(); ++i) {
    CHECK(atoms[i]["mass"].get<double>() > 0.0);
    if (i) CHECK(atoms[i]["lambda"].get<double>() > atoms[i - 1]["lambda"].get<double>());
  }

  REQUIRE(run("measure --lambda-max 400 --format csv -o " + tmp("m400.csv")).code == 0);
  REQUIRE(run("measure --lambda-max 800 --format csv -o " + tmp("m800.csv")).code == 0);
  std::string small = slurp(tmp("m400.csv")), big = slurp(tmp("m800.csv"));
  CHECK(small.rfind("lambda,mass\n", 0) == 0);
  CHECK(big.size() > small.size());
  CHECK(big.compare(0, small.size(), small) == 0);

  // 17 significant digits survive a parse round trip
  double first = atoms[0]["lambda"].get<double>();
  std::string line = small.substr(small.find('\n') + 1);
  CHECK(std::stod(line.substr(0, line.find(','))) == first);

  CHECK(run("measure --lambda-max 400 --format xml").code == 2);
  CHECK(run("measure --gamma 0 --lambda-max 400").code == 2);
}

TEST_CASE("verify") {
  Run a = run("verify --seed 42 -o " + tmp("v1.json"));
  Run b = run("verify --seed 42 -o " + tmp("v2.json"));
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  std::string ra = slurp(tmp("v1.json"));
  CHECK(ra == slurp(tmp("v2.json")));
  auto j = nlohmann::json::parse(ra);
  CHECK(j["passed"].get<bool>());
  CHECK(j["suites"].size() >= 6);
  for (const auto& s : j["suites"])
    for (const auto& c : s["checks"]) CHECK(c.contains("residual"));

  CHECK(run("verify --seed 7 -o " + tmp("v3.json")).code == 0);

  Run zero = run("verify --tol parseval/defect_beyond_tail=0 -o " + tmp("v4.json"));
  CHECK(zero.code == 4);
  CHECK(zero.out.find("FAIL parseval/defect_beyond_tail") != std::string::npos);
  CHECK(zero.out.find("FAIL poisson") == std::string::npos);
}

TEST_CASE("homog") {
  Run r = run("homog --csv " + tmp("h.csv") + " --summary " + tmp("h.json"));
  CHECK(r.code == 0);
  std::string csv = slurp(tmp("h.csv"));
  CHECK(csv.rfind("eps,theta,z_re,z_im,resolvent_error,eig_error\n", 0) == 0);
  auto j = nlohmann::json::parse(slurp(tmp("h.json")));
  double rs = j["resolvent_fit"]["slope"].get<double>(), es = j["eig_fit"]["slope"].get<double>();
  CHECK(rs >= 1.8);
  CHECK(rs <= 2.2);
  CHECK(es >= 1.8);
  CHECK(es <= 2.2);

  CHECK(run("homog --eps 0.1,0.05").code == 2);
  Run eig = run("homog --eig-only --csv " + tmp("he.csv") + " --summary " + tmp("he.json"));
  CHECK(eig.code == 0);
  CHECK(slurp(tmp("he.csv")).find("nan") != std::string::npos);
  CHECK(run("homog --slope-min 2.5 --slope-max 3 --csv " + tmp("h2.csv") + " --summary " + tmp("h2.json")).code == 4);
}

TEST_CASE("resolvent-compare") {
  Run r = run("resolvent-compare --pairs 3 -o " + tmp("rc.csv"));
  CHECK(r.code == 0);
  std::istringstream in(slurp(tmp("rc.csv")));
  std::string line;
  std::getline(in, line);
  CHECK(line == "pair,direct_re,direct_im,model_re,model_im,abs_diff,tail_defect");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    double diff = std::stod(line.substr(line.rfind(',', line.rfind(',') - 1) + 1));
    double tail = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(diff <= 10.0 * tail);
  }
  CHECK(rows == 3);
  CHECK(run("resolvent-compare --z 2,0").code == 2);
}
