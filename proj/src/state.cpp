#include "nsmodel/state.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>

namespace nsmodel {

std::shared_ptr<const QuadratureGrid> QuadratureGrid::make(double length, int order) {
  if (!(length > 0.0) || order < 2) throw Error(ErrorKind::InvalidParams, "bad quadrature grid");
  auto grid = std::make_shared<QuadratureGrid>();
  grid->length = length;
  grid->nodes.resize(order);
  grid->weights.resize(order);
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(order);
  for (int i = 0; i < order; ++i)
    gsl_integration_glfixed_point(0.0, length, i, &grid->nodes[i], &grid->weights[i], table);
  gsl_integration_glfixed_table_free(table);
  return grid;
}

StateVector StateVector::from_function(std::shared_ptr<const QuadratureGrid> grid, ExpPoly u,
                                       Complex beta) {
  StateVector s;
  s.samples_.resize(grid->nodes.size());
  for (std::size_t i = 0; i < grid->nodes.size(); ++i) s.samples_[i] = u(grid->nodes[i]);
  s.grid_ = std::move(grid);
  s.scalar_ = beta;
  s.descriptor_ = std::move(u);
  return s;
}

StateVector StateVector::from_samples(std::shared_ptr<const QuadratureGrid> grid,
                                      std::vector<Complex> samples, Complex beta) {
  if (samples.size() != grid->nodes.size())
    throw Error(ErrorKind::InvalidParams, "sample count differs from quadrature order");
  StateVector s;
  s.grid_ = std::move(grid);
  s.samples_ = std::move(samples);
  s.scalar_ = beta;
  return s;
}

const ExpPoly& StateVector::descriptor() const {
  if (!descriptor_) throw Error(ErrorKind::MissingDerivativeData, "state has samples only");
  return *descriptor_;
}

double StateVector::norm() const { return std::sqrt(std::real(inner(*this, *this))); }

StateVector StateVector::operator+(const StateVector& o) const {
  if (descriptor_ && o.descriptor_) return from_function(grid_, *descriptor_ + *o.descriptor_, scalar_ + o.scalar_);
  std::vector<Complex> s(samples_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = samples_[i] + o.samples_[i];
  return from_samples(grid_, std::move(s), scalar_ + o.scalar_);
}

StateVector StateVector::operator-(const StateVector& o) const { return *this + o * Complex(-1.0); }

StateVector StateVector::operator*(Complex a) const {
  if (descriptor_) return from_function(grid_, *descriptor_ * a, scalar_ * a);
  std::vector<Complex> s(samples_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = samples_[i] * a;
  return from_samples(grid_, std::move(s), scalar_ * a);
}

Complex inner(const StateVector& a, const StateVector& b) {
  const auto& w = a.grid().weights;
  Complex sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * a.samples()[i] * std::conj(b.samples()[i]);
  return sum + a.scalar() * std::conj(b.scalar());
}

}  // namespace nsmodel
