#ifndef LOGWG_ENERGY_HPP
#define LOGWG_ENERGY_HPP

#include "logwg/domain.hpp"

namespace logwg {

/// Threshold of the convex/subcritical split of s^2 log s^2.
struct SplitParams {
  Real delta = 0.05;
  void validate() const;
};

/// Saturation constant of log(eps + |u|^2); zero means the exact logarithm
/// with 0 log 0 = 0.
struct RegularizationParams {
  Real eps_sat = 0.0;
  void validate() const;
};

struct EnergyBreakdown {
  Real kinetic_x = 0.0;          ///< (1/2) int |grad_x u|^2
  Real kinetic_y_weighted = 0.0; ///< (mu/2) int |grad_y u|^2
  Real l2_half = 0.0;            ///< (1/2) int |u|^2
  Real entropy_half = 0.0;       ///< (1/2) int |u|^2 log(eps + |u|^2)
  Real f1_integral = 0.0;        ///< int F1(|u|)
  Real f2_integral = 0.0;        ///< int F2(|u|)
  Real mu = 1.0;
  Real total = 0.0;
};

struct SplitValue {
  Real f1 = 0.0;
  Real f2 = 0.0;
};

/// F1, F2 with F2(s) - F1(s) = s^2 log(s^2) / 2.
SplitValue f_split_eval(Real s, const SplitParams& split);
/// Derivatives F1'(s), F2'(s).
SplitValue f_split_derivative(Real s, const SplitParams& split);

/// s^2 log(eps + s^2) with the 0 log 0 = 0 convention when eps = 0.
Real entropy_density(Real s2, Real eps_sat);

/// Quadrature of |u|^2 log(eps + |u|^2).
Real entropy(const Field& u, const RegularizationParams& reg);

/// The anisotropic functional I_mu; mu = 1 is the isotropic energy.
EnergyBreakdown energy(const SpectralWorkspace& ws, const Field& u, Real mu,
                       const RegularizationParams& reg = {}, const SplitParams& split = {});

/// L2 gradient of I_mu:
/// -Delta_x u - mu Delta_y u + u - u log(eps + |u|^2) - u |u|^2 / (eps + |u|^2).
/// For eps = 0 the last two terms collapse to -u log|u|^2 - u.
Field first_variation(const SpectralWorkspace& ws, const Field& u, Real mu, const RegularizationParams& reg = {});

/// Energy and gradient from one forward transform.
struct EnergyAndGradient {
  EnergyBreakdown energy;
  Field gradient;
};
EnergyAndGradient energy_and_gradient(const SpectralWorkspace& ws, const Field& u, Real mu,
                                      const RegularizationParams& reg = {}, const SplitParams& split = {});

/// Gagliardo-Nirenberg quotient
/// ||u||_{2+a}^{2+a} / (||u||_{H1}^t ||u||_2^{2+a-t}), t = (d+n) a / 2.
Real gn_ratio(const SpectralWorkspace& ws, const Field& u, Real alpha);

/// Exponent t(alpha) = (d+n) alpha / 2.
inline Real gn_theta(int d, int n, Real alpha) { return (d + n) * alpha / 2.0; }

} // namespace logwg

#endif // LOGWG_ENERGY_HPP
