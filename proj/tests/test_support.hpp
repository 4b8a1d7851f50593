#ifndef LOGWG_TEST_SUPPORT_HPP
#define LOGWG_TEST_SUPPORT_HPP

// Reference values computed independently of the library: closed forms
// derived by hand and adaptive Gauss-Kronrod quadrature from boost.

#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace testref {

inline constexpr double pi = std::numbers::pi;

/// Waveguide mass whose y-independent Gausson has multiplier 2 (d = n = 1).
inline double standard_mass() { return 2.0 * pi * std::sqrt(pi) * std::exp(3.0); }

/// 2 pi times the reduced energy at that mass: -pi sqrt(pi) e^3.
inline double standard_energy() { return 2.0 * pi * (-0.5 * std::sqrt(pi) * std::exp(3.0)); }

inline double gk(const std::function<double(double)>& f, double a, double b, double tol = 1e-15) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

/// Energy of c exp(-x^2/2) on the line, by quadrature of the density.
inline double line_gaussian_energy(double c) {
  auto density = [c](double x) {
    const double u = c * std::exp(-0.5 * x * x);
    const double du = -x * u;
    const double u2 = u * u;
    return 0.5 * du * du + 0.5 * u2 - (u2 > 0.0 ? 0.5 * u2 * std::log(u2) : 0.0);
  };
  return gk(density, -40.0, 0.0) + gk(density, 0.0, 40.0);
}

} // namespace testref

#endif // LOGWG_TEST_SUPPORT_HPP
