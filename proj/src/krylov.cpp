#include "nsmodel/krylov.hpp"

#include <algorithm>
#include <cmath>

namespace nsmodel {

namespace {

Eigen::VectorXcd start_vector(int n) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = std::complex<double>(1.0 + 0.37 * std::sin(1.3 * i), 0.21 * std::cos(0.7 * i));
  return v / v.norm();
}

void orthogonalise(Eigen::VectorXcd& v, const std::vector<Eigen::VectorXcd>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) v -= b * b.dot(v);
}

}  // namespace

SingularEstimate top_singular_value(const LinearMap& apply, const LinearMap& apply_adjoint, int n, int m,
                                    int max_steps, double rel_tol) {
  SingularEstimate out;
  std::vector<Eigen::VectorXcd> vs, us;
  std::vector<double> alpha, beta;
  Eigen::VectorXcd v = start_vector(n), u(m), w(n);
  double prev = 0.0;
  int steps = std::min({max_steps, n, m});
  for (int k = 0; k < steps; ++k) {
    vs.push_back(v);
    apply(v, u);
    if (k > 0) u -= beta.back() * us.back();
    orthogonalise(u, us);
    double a = u.norm();
    if (a == 0.0) break;
    u /= a;
    us.push_back(u);
    alpha.push_back(a);

    // upper bidiagonal B with alpha on the diagonal and beta above it
    int dim = static_cast<int>(alpha.size());
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      b(i, i) = alpha[i];
      if (i + 1 < dim) b(i, i + 1) = beta[i];
    }
    double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues()(0);
    out.value = sigma;
    out.steps = k + 1;
    if (k > 2 && std::abs(sigma - prev) <= rel_tol * sigma) {
      out.converged = true;
      break;
    }
    prev = sigma;

    apply_adjoint(u, w);
    w -= a * v;
    orthogonalise(w, vs);
    double bb = w.norm();
    if (bb <= 1e-14 * sigma) {
      out.converged = true;
      break;
    }
    beta.push_back(bb);
    v = w / bb;
  }
  return out;
}

LanczosResult lanczos_largest(const LinearMap& apply, int n, int count, int max_steps, double rel_tol) {
  LanczosResult out;
  std::vector<Eigen::VectorXcd> q;
  std::vector<double> alpha, beta;
  Eigen::VectorXcd v = start_vector(n), w(n);
  int steps = std::min(max_steps, n);
  for (int k = 0; k < steps; ++k) {
    q.push_back(v);
    apply(v, w);
    double a = std::real(v.dot(w));
    w -= a * v;
    if (k > 0) w -= beta.back() * q[k - 1];
    orthogonalise(w, q);
    alpha.push_back(a);
    double b = w.norm();

    int dim = k + 1;
    if (dim >= count && (dim % 5 == 0 || dim == steps || b == 0.0)) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < dim) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      bool ok = true;
      out.values.clear();
      for (int j = 0; j < count; ++j) {
        int idx = dim - 1 - j;
        double theta = es.eigenvalues()(idx);
        double resid = std::abs(b * es.eigenvectors()(dim - 1, idx));
        out.values.push_back(theta);
        if (resid > rel_tol * std::max(std::abs(theta), 1e-300)) ok = false;
      }
      if (ok || b == 0.0) {
        out.converged = true;
        return out;
      }
    }
    if (b == 0.0) break;
    beta.push_back(b);
    v = w / b;
  }
  return out;
}

}  // namespace nsmodel
