#include "logwg/energy.hpp"

#include <cmath>

namespace logwg {

namespace {

// Below this |u|^2 the exact-log integrand is replaced by its limit 0.
constexpr Real kTinyDensity = 1e-300;

// Coefficient c(rho) of the local gradient term c * u.
Real local_gradient_coefficient(Real rho, Real eps) {
  if (eps == 0.0) return rho < kTinyDensity ? 0.0 : -std::log(rho);
  return 1.0 - std::log(eps + rho) - rho / (eps + rho);
}

} // namespace

void SplitParams::validate() const {
  if (!(delta > 0.0) || delta > std::exp(-1.5))
    throw DomainError("split threshold delta must lie in (0, e^{-3/2}] for F1 to be convex");
}

void RegularizationParams::validate() const {
  if (!(eps_sat >= 0.0) || !std::isfinite(eps_sat)) throw DomainError("eps_sat must be finite and >= 0");
}

SplitValue f_split_eval(Real s, const SplitParams& split) {
  const Real a = std::abs(s);
  const Real dl = split.delta;
  if (a == 0.0) return {0.0, 0.0};
  const Real s2 = s * s;
  if (a < dl) return {-0.5 * s2 * std::log(s2), 0.0};
  const Real logd2 = std::log(dl * dl);
  return {-0.5 * s2 * (logd2 + 3.0) + 2.0 * dl * a - 0.5 * dl * dl,
          0.5 * s2 * (std::log(s2) - logd2) + 2.0 * dl * a - 1.5 * s2 - 0.5 * dl * dl};
}

SplitValue f_split_derivative(Real s, const SplitParams& split) {
  const Real a = std::abs(s);
  const Real dl = split.delta;
  if (a == 0.0) return {0.0, 0.0};
  const Real sign = s > 0.0 ? 1.0 : -1.0;
  if (a < dl) return {-s * std::log(s * s) - s, 0.0};
  const Real logd2 = std::log(dl * dl);
  return {-s * (logd2 + 3.0) + 2.0 * dl * sign, s * (std::log(s * s) - logd2) + 2.0 * dl * sign - 2.0 * s};
}

Real entropy_density(Real s2, Real eps_sat) {
  if (eps_sat == 0.0) return s2 < kTinyDensity ? 0.0 : s2 * std::log(s2);
  return s2 * std::log(eps_sat + s2);
}

Real entropy(const Field& u, const RegularizationParams& reg) {
  const RealArray rho = u.samples.abs2();
  Real acc = 0.0;
  for (Eigen::Index i = 0; i < rho.size(); ++i) acc += entropy_density(rho[i], reg.eps_sat);
  return acc * u.grid.cell_volume();
}

namespace {

EnergyBreakdown assemble(const Field& u, const RealArray& power, const SpectralWorkspace& ws, Real mu,
                         const RegularizationParams& reg, const SplitParams& split) {
  const Real dv = u.grid.cell_volume();
  const Real w = dv / static_cast<Real>(u.samples.size());
  EnergyBreakdown e;
  e.mu = mu;
  e.kinetic_x = 0.5 * (ws.ksq_x() * power).sum() * w;
  e.kinetic_y_weighted = 0.5 * mu * (ws.ksq_y() * power).sum() * w;
  const RealArray rho = u.samples.abs2();
  Real s_ent = 0.0, s_f1 = 0.0, s_f2 = 0.0;
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    s_ent += entropy_density(rho[i], reg.eps_sat);
    const SplitValue f = f_split_eval(std::sqrt(rho[i]), split);
    s_f1 += f.f1;
    s_f2 += f.f2;
  }
  e.l2_half = 0.5 * rho.sum() * dv;
  e.entropy_half = 0.5 * s_ent * dv;
  e.f1_integral = s_f1 * dv;
  e.f2_integral = s_f2 * dv;
  e.total = e.kinetic_x + e.kinetic_y_weighted + e.l2_half - e.entropy_half;
  return e;
}

} // namespace

EnergyBreakdown energy(const SpectralWorkspace& ws, const Field& u, Real mu, const RegularizationParams& reg,
                       const SplitParams& split) {
  const ComplexArray hat = ws.forward(u.samples);
  return assemble(u, hat.abs2(), ws, mu, reg, split);
}

EnergyAndGradient energy_and_gradient(const SpectralWorkspace& ws, const Field& u, Real mu,
                                      const RegularizationParams& reg, const SplitParams& split) {
  ComplexArray hat = ws.forward(u.samples);
  EnergyAndGradient out{assemble(u, hat.abs2(), ws, mu, reg, split), Field(u.grid)};
  hat *= (ws.ksq_x() + mu * ws.ksq_y()).cast<Complex>();
  out.gradient.samples = ws.inverse(hat);
  for (Eigen::Index i = 0; i < u.samples.size(); ++i)
    out.gradient.samples[i] += local_gradient_coefficient(std::norm(u.samples[i]), reg.eps_sat) * u.samples[i];
  return out;
}

Field first_variation(const SpectralWorkspace& ws, const Field& u, Real mu, const RegularizationParams& reg) {
  Field g = neg_laplacian(ws, u, mu);
  for (Eigen::Index i = 0; i < u.samples.size(); ++i)
    g.samples[i] += local_gradient_coefficient(std::norm(u.samples[i]), reg.eps_sat) * u.samples[i];
  return g;
}

Real gn_ratio(const SpectralWorkspace& ws, const Field& u, Real alpha) {
  const int dim = u.grid.rank();
  if (!(alpha > 0.0) || !(alpha < 4.0 / dim))
    throw DomainError("gn_ratio: alpha must lie in (0, 4/(d+n))");
  const Real m = mass(u);
  if (!(m > 0.0)) throw DomainError("gn_ratio: zero field");
  const KineticSplit k = kinetic_split(ws, u);
  const Real p = 2.0 + alpha;
  const Real lp = u.samples.abs().pow(p).sum() * u.grid.cell_volume();
  const Real theta = gn_theta(u.grid.d, u.grid.n, alpha);
  const Real h1 = std::sqrt(m + k.kx + k.ky);
  return lp / (std::pow(h1, theta) * std::pow(std::sqrt(m), p - theta));
}

} // namespace logwg
