#ifndef LOGWG_QUADRATURE_HPP
#define LOGWG_QUADRATURE_HPP

#include <functional>

#include "logwg/domain.hpp"

namespace logwg {

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
struct GaussRule {
  RealArray nodes;
  RealArray weights;
};
GaussRule gauss_legendre(int order);

/// Composite Gauss-Legendre over `panels` equal subintervals of [lo, hi].
Real integrate(const std::function<Real(Real)>& f, Real lo, Real hi, int panels = 16, int order = 20);

} // namespace logwg

#endif // LOGWG_QUADRATURE_HPP
