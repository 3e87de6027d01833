#include "nsmodel/exp_poly.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace nsmodel {

ExpPoly::ExpPoly(std::vector<ExpTerm> terms) : terms_(std::move(terms)) {}

ExpPoly ExpPoly::constant(Complex c) { return term(c, 0, 0.0); }

ExpPoly ExpPoly::term(Complex coeff, int power, Complex rate) {
  return ExpPoly({ExpTerm{coeff, power, rate}});
}

Complex ExpPoly::operator()(double x) const {
  Complex sum = 0.0;
  for (const auto& t : terms_) {
    Complex v = t.coeff * std::exp(t.rate * x);
    for (int i = 0; i < t.power; ++i) v *= x;
    sum += v;
  }
  return sum;
}

ExpPoly ExpPoly::derivative() const {
  std::vector<ExpTerm> out;
  out.reserve(2 * terms_.size());
  for (const auto& t : terms_) {
    if (t.rate != 0.0) out.push_back({t.coeff * t.rate, t.power, t.rate});
    if (t.power > 0) out.push_back({t.coeff * double(t.power), t.power - 1, t.rate});
  }
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::primitive(double length) const {
  std::vector<ExpTerm> out;
  for (const auto& t : terms_) {
    double kl = std::abs(t.rate) * length;
    if (kl < 1.0) {
      // power series of exp(rate*y); terms are summed against y^(p+n)
      Complex factor = t.coeff;
      for (int n = 0; n < 40; ++n) {
        out.push_back({factor / double(t.power + n + 1), t.power + n + 1, 0.0});
        factor *= t.rate / double(n + 1);
        if (std::abs(factor) * std::pow(length, n + 1) <= 1e-18 * std::abs(t.coeff)) break;
        if (t.rate == 0.0) break;
      }
      continue;
    }
    // integral of y^p e^{ky} = e^{kx} sum_m (-1)^m p!/(p-m)! x^{p-m} / k^{m+1}
    Complex inv = 1.0 / t.rate;
    Complex c = t.coeff * inv;
    for (int m = 0; m <= t.power; ++m) {
      out.push_back({c, t.power - m, t.rate});
      c *= -double(t.power - m) * inv;
    }
    // value at 0 comes only from the m = p term
    Complex at_zero = t.coeff;
    for (int m = 0; m <= t.power; ++m) at_zero *= inv * (m == 0 ? 1.0 : -double(m));
    out.push_back({-at_zero, 0, 0.0});
  }
  return ExpPoly(std::move(out)).simplified();
}

Complex ExpPoly::integral(double a, double b, double length) const {
  ExpPoly p = primitive(length);
  return p(b) - p(a);
}

ExpPoly ExpPoly::times_exp(Complex rate) const {
  ExpPoly out = *this;
  for (auto& t : out.terms_) t.rate += rate;
  return out;
}

ExpPoly ExpPoly::conj() const {
  ExpPoly out = *this;
  for (auto& t : out.terms_) {
    t.coeff = std::conj(t.coeff);
    t.rate = std::conj(t.rate);
  }
  return out;
}

ExpPoly ExpPoly::simplified() const {
  std::vector<ExpTerm> sorted = terms_;
  auto key = [](const ExpTerm& t) {
    return std::make_tuple(t.power, t.rate.real(), t.rate.imag());
  };
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](const ExpTerm& a, const ExpTerm& b) { return key(a) < key(b); });
  std::vector<ExpTerm> out;
  for (const auto& t : sorted) {
    if (!out.empty() && key(out.back()) == key(t))
      out.back().coeff += t.coeff;
    else
      out.push_back(t);
  }
  std::erase_if(out, [](const ExpTerm& t) { return t.coeff == 0.0; });
  return ExpPoly(std::move(out));
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  *this = simplified();
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& other) { return *this += other * Complex(-1.0); }

ExpPoly& ExpPoly::operator*=(Complex s) {
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  std::vector<ExpTerm> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& s : a.terms())
    for (const auto& t : b.terms()) out.push_back({s.coeff * t.coeff, s.power + t.power, s.rate + t.rate});
  return ExpPoly(std::move(out)).simplified();
}

ExpPoly d_tau(const ExpPoly& u, double tau) { return u.derivative() + u * Complex(0.0, tau); }

}  // namespace nsmodel
