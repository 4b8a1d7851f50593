#include "logwg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "logwg/oracle.hpp"
#include "logwg/quadrature.hpp"

namespace logwg {

namespace {

constexpr Real kPi = std::numbers::pi;

Real bump_unnormalized(Real t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

Real bump_normalization() {
  static const Real z = integrate(bump_unnormalized, -1.0, 1.0, 64, 20);
  return z;
}

Real square(Real v) { return v * v; }
Real square_log_square(Real v) { return v == 0.0 ? 0.0 : 2.0 * v * v * std::log(std::abs(v)); }

} // namespace

Real TentParams::slope() const { return std::exp(5.0 / 6.0) / (kPi - a); }

void TentParams::validate() const {
  if (!(a > 0.0 && a < kPi)) throw DomainError("tent support parameter a must lie in (0, pi)");
  if (!(eps_moll > 0.0) || !(eps_moll < 0.5 * a))
    throw DomainError("mollifier width must lie in (0, a/2) to keep the support inside (0, 2 pi)");
}

TentNorms tent_norms(Real a) {
  if (!(a > 0.0 && a < kPi)) throw DomainError("tent_norms: a must lie in (0, pi)");
  const Real w = kPi - a;
  const Real b = std::exp(5.0 / 6.0) / w;
  TentNorms out;
  out.norm_sq = 2.0 * std::exp(5.0 / 3.0) * w / 3.0;
  out.entropy_int = 4.0 * b * b * w * w * w / 9.0 * (3.0 * std::log(w) - 1.0 + 3.0 * std::log(b));
  return out;
}

Real tent_profile(Real a, Real y) {
  Real t = std::fmod(y, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t > kPi) t = 2.0 * kPi - t;
  if (t <= a) return 0.0;
  return std::exp(5.0 / 6.0) / (kPi - a) * (t - a);
}

Real bump_kernel(Real t) { return bump_unnormalized(t) / bump_normalization(); }

MollifiedTent::MollifiedTent(const TentParams& params) : params_(params) { params_.validate(); }

Real MollifiedTent::operator()(Real y) const {
  const Real a = params_.a;
  const Real e = params_.eps_moll;
  Real t = std::fmod(y, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t > kPi) t = 2.0 * kPi - t;
  // The tent is piecewise linear, so the symmetric kernel reproduces it
  // exactly away from the kinks at a and pi.
  const bool near_a = std::abs(t - a) < e;
  const bool near_peak = kPi - t < e;
  if (!near_a && !near_peak) return tent_profile(a, t);

  std::vector<Real> cuts{-1.0, 1.0};
  for (Real kink : {a, kPi, 2.0 * kPi - a, -a}) {
    const Real s = (t - kink) / e;
    if (s > -1.0 && s < 1.0) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());
  Real acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += integrate([&](Real s) { return bump_kernel(s) * tent_profile(a, t - e * s); }, cuts[i], cuts[i + 1], 8,
                     20);
  return acc;
}

Real MollifiedTent::integrate_symmetric(Real (*integrand)(Real)) const {
  const Real a = params_.a;
  const Real e = params_.eps_moll;
  auto f = [&](Real y) { return integrand((*this)(y)); };
  // Support is [a - e, 2 pi - a + e]; the profile is even about pi.
  std::vector<Real> cuts{a - e, std::min(a + e, kPi), std::max(kPi - e, a - e), kPi};
  std::sort(cuts.begin(), cuts.end());
  Real half = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) half += integrate(f, cuts[i], cuts[i + 1], 32, 20);
  return 2.0 * half;
}

Real MollifiedTent::norm_sq() const { return integrate_symmetric(square); }

Real MollifiedTent::entropy_int() const { return integrate_symmetric(square_log_square); }

RealArray mollified_tent(const TentParams& params, int points_y) {
  if (points_y < 8) throw DomainError("mollified_tent: need at least 8 samples");
  const MollifiedTent tent(params);
  RealArray out(points_y);
  const Real dy = 2.0 * kPi / points_y;
  for (int j = 0; j < points_y; ++j) out[j] = tent(j * dy);
  return out;
}

Field tensor_testfield(Real theta, const TentParams& params, const GridSpec& grid) {
  grid.validate();
  if (grid.d < 1 || grid.n < 1) throw DomainError("tensor_testfield: grid needs d >= 1 and n >= 1");
  const Real phi_sq = tent_norms(params.a).norm_sq;
  const RealArray profile = mollified_tent(params, grid.points_y);
  // Normalise with the discrete norm so that ||psi||_2 = theta holds on the grid.
  const Real ratio = std::sqrt(phi_sq / (profile.square().sum() * grid.dy()));
  // Q carries squared norm theta^2 / ||phi||^{2n}.
  const Real q_mass = theta * theta / std::pow(phi_sq, grid.n);
  const GaussonSpec q = GaussonSpec::from_mass(q_mass, grid.d);
  const Real edge = q.amplitude * std::exp(-0.5 * grid.half_width * grid.half_width);
  if (edge > 1e-12) throw DomainError("tensor_testfield: box too small for the reduced Gausson");
  return sample(grid, [&](std::span<const Real> x, std::span<const Real> y) {
    Real r2 = 0.0;
    for (Real xa : x) r2 += xa * xa;
    Real value = q.amplitude * std::exp(-0.5 * r2);
    for (Real yb : y) {
      const int j = static_cast<int>(std::lround(yb / grid.dy())) % grid.points_y;
      value *= ratio * profile[j];
    }
    return value;
  });
}

TentBound tent_bound(Real theta, const TentParams& params, int d, int n) {
  if (!(theta > 0.0)) throw DomainError("tent_bound: theta must be positive");
  if (d < 1 || n < 1) throw DomainError("tent_bound: need d >= 1 and n >= 1");
  const MollifiedTent tent(params);
  TentBound out;
  out.a = params.a;
  out.eps_moll = params.eps_moll;
  out.norm_sq = tent_norms(params.a).norm_sq;
  out.norm_sq_moll = tent.norm_sq();
  const Real theta2 = theta * theta;
  const Real phi_2n = std::pow(out.norm_sq, n);
  out.main_term = phi_2n * gausson_energy(theta2 / phi_2n, d);

  // J = int Phi1^2 log Phi1^2 with Phi1 = rho phi_eps, ||Phi1|| = ||phi||.
  const Real rho2 = out.norm_sq / out.norm_sq_moll;
  const Real j_int = rho2 * (tent.entropy_int() + out.norm_sq_moll * std::log(rho2));
  out.correction = -0.5 * n * theta2 * j_int / out.norm_sq;
  out.correction_limit = -0.5 * n * theta2;
  out.i0 = out.main_term + out.correction;
  const Real torus = std::pow(2.0 * kPi, n);
  out.reference = torus * gausson_energy(theta2 / torus, d);
  out.strict = out.i0 < out.reference;
  return out;
}

std::vector<TentBound> upper_bound_I0(Real theta, const std::vector<Real>& a_grid, Real eps_moll, int d, int n) {
  std::vector<TentBound> rows;
  rows.reserve(a_grid.size());
  for (Real a : a_grid) rows.push_back(tent_bound(theta, TentParams{a, eps_moll}, d, n));
  return rows;
}

Real EigenBoxParams::eigenvalue() const { return d * kPi * kPi / (ell * ell); }

void EigenBoxParams::validate() const {
  if (d < 1 || n < 0) throw DomainError("eigen box needs d >= 1, n >= 0");
  if (!(ell > 0.0) || !(theta > 0.0)) throw DomainError("eigen box needs ell > 0 and theta > 0");
}

Real mean_log_sine_squared() {
  static const Real value = [] {
    const Real num = integrate(
        [](Real t) {
          const Real s = std::sin(t);
          return square_log_square(s);
        },
        0.0, kPi, 64, 20);
    return num / (0.5 * kPi);
  }();
  return value;
}

Real eigen_testfield_energy(const EigenBoxParams& params, Real r) {
  params.validate();
  if (!(r > 0.0)) throw DomainError("dilation r must be positive");
  const Real theta2 = params.theta * params.theta;
  const Real amp2 = theta2 / (std::pow(0.5 * params.ell, params.d) * std::pow(2.0 * kPi, params.n));
  const Real kinetic = params.eigenvalue() * theta2 / (r * r);
  const Real ent = theta2 * (std::log(amp2 * std::pow(r, -params.d)) + params.d * mean_log_sine_squared());
  return 0.5 * kinetic + 0.5 * theta2 - 0.5 * ent;
}

std::vector<EigenScanRow> eigen_testfield_scan(const EigenBoxParams& params, const std::vector<Real>& r_grid) {
  params.validate();
  const Real eig = params.eigenvalue();
  const Real volume = std::pow(params.ell, params.d) * std::pow(2.0 * kPi, params.n);
  EigenScanRow base;
  base.lower_printed = std::sqrt(2.0 / eig);
  base.lower_rederived = std::sqrt(2.0 * eig);
  base.upper = std::pow(params.theta / (4.0 * std::sqrt(volume)), 2.0 / params.d);
  std::vector<EigenScanRow> rows;
  for (Real r : r_grid) {
    EigenScanRow row = base;
    row.r = r;
    row.energy = eigen_testfield_energy(params, r);
    row.in_window_printed = r > row.lower_printed && r < row.upper;
    row.in_window_rederived = r > row.lower_rederived && r < row.upper;
    row.negative = row.energy < 0.0;
    rows.push_back(row);
  }
  return rows;
}

} // namespace logwg
