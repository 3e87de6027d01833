#pragma once

#include <vector>

#include "nsmodel/types.hpp"

namespace nsmodel {

// coeff * x^power * exp(rate * x)
struct ExpTerm {
  Complex coeff;
  int power = 0;
  Complex rate;
};

// Finite sums of exponential-polynomial terms on a real interval. The family is closed
// under differentiation, integration, products and conjugation, so particular solutions
// of the constant-coefficient problems stay exact.
class ExpPoly {
 public:
  ExpPoly() = default;
  explicit ExpPoly(std::vector<ExpTerm> terms);

  static ExpPoly constant(Complex c);
  static ExpPoly term(Complex coeff, int power, Complex rate);
  static ExpPoly exponential(Complex coeff, Complex rate) { return term(coeff, 0, rate); }
  static ExpPoly monomial(Complex coeff, int power) { return term(coeff, power, 0.0); }

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Complex operator()(double x) const;

  ExpPoly derivative() const;
  // Antiderivative vanishing at 0; length is the interval scale used to pick a stable formula.
  ExpPoly primitive(double length) const;
  Complex integral(double a, double b, double length) const;

  ExpPoly times_exp(Complex rate) const;
  // Complex conjugate for real argument.
  ExpPoly conj() const;
  ExpPoly simplified() const;

  ExpPoly& operator+=(const ExpPoly& other);
  ExpPoly& operator-=(const ExpPoly& other);
  ExpPoly& operator*=(Complex s);

  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(ExpPoly a, Complex s) { return a *= s; }
  friend ExpPoly operator*(Complex s, ExpPoly a) { return a *= s; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);

 private:
  std::vector<ExpTerm> terms_;
};

// (d/dx + i tau) u
ExpPoly d_tau(const ExpPoly& u, double tau);

}  // namespace nsmodel
