#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "nsmodel/exp_poly.hpp"
#include "nsmodel/types.hpp"

namespace nsmodel {

inline constexpr int kDefaultQuadratureOrder = 128;

// Gauss-Legendre rule on [0, length].
struct QuadratureGrid {
  double length = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  static std::shared_ptr<const QuadratureGrid> make(double length,
                                                    int order = kDefaultQuadratureOrder);
  int order() const { return static_cast<int>(nodes.size()); }
};

// Element (u, beta) of L2(0,l) + C.
class StateVector {
 public:
  StateVector() = default;

  static StateVector from_function(std::shared_ptr<const QuadratureGrid> grid, ExpPoly u,
                                   Complex beta);
  static StateVector from_samples(std::shared_ptr<const QuadratureGrid> grid,
                                  std::vector<Complex> samples, Complex beta);

  const QuadratureGrid& grid() const { return *grid_; }
  std::shared_ptr<const QuadratureGrid> grid_ptr() const { return grid_; }
  const std::vector<Complex>& samples() const { return samples_; }
  Complex scalar() const { return scalar_; }
  bool has_descriptor() const { return descriptor_.has_value(); }
  // Throws MissingDerivativeData for samples-only states.
  const ExpPoly& descriptor() const;

  double norm() const;

  StateVector operator+(const StateVector& o) const;
  StateVector operator-(const StateVector& o) const;
  StateVector operator*(Complex s) const;

 private:
  std::shared_ptr<const QuadratureGrid> grid_;
  std::vector<Complex> samples_;
  Complex scalar_ = 0.0;
  std::optional<ExpPoly> descriptor_;
};

// <a, b> = int u conj(v) + beta conj(zeta), linear in the first slot.
Complex inner(const StateVector& a, const StateVector& b);

}  // namespace nsmodel
