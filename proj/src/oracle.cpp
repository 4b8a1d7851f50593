#include "logwg/oracle.hpp"

#include <cmath>
#include <numbers>

namespace logwg {

namespace {

void require_positive_mass(Real m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("reduced mass must be positive and finite");
}

} // namespace

Real lambda_of_mass(Real reduced_mass, int d) {
  require_positive_mass(reduced_mass);
  return std::log(reduced_mass) - 0.5 * d * std::log(std::numbers::pi) - d;
}

Real mass_of_lambda(Real lambda, int d) { return std::pow(std::numbers::pi, 0.5 * d) * std::exp(d + lambda); }

Real gausson_energy(Real reduced_mass, int d) {
  require_positive_mass(reduced_mass);
  return 0.5 * reduced_mass * (d + 1.0 - (std::log(reduced_mass) - 0.5 * d * std::log(std::numbers::pi)));
}

GaussonSpec GaussonSpec::from_mass(Real reduced_mass, int d) {
  GaussonSpec g;
  g.d = d;
  g.reduced_mass = reduced_mass;
  g.lambda = lambda_of_mass(reduced_mass, d);
  g.amplitude = std::exp(0.5 * (d + g.lambda));
  return g;
}

GaussonSpec GaussonSpec::from_lambda(Real lambda, int d) { return from_mass(mass_of_lambda(lambda, d), d); }

Real reduced_mass_of(const GridSpec& grid, Real theta) {
  return theta * theta / std::pow(2.0 * std::numbers::pi, grid.n);
}

Field sample_gausson(const GridSpec& grid, Real theta, Real shift) {
  grid.validate();
  if (grid.d < 1) throw DomainError("sample_gausson: grid needs at least one unbounded axis");
  if (!(theta > 0.0)) throw DomainError("sample_gausson: theta must be positive");
  const GaussonSpec g = GaussonSpec::from_mass(reduced_mass_of(grid, theta), grid.d);
  const Real L = grid.half_width;
  const Real wrapped_shift = shift - 2.0 * L * std::round(shift / (2.0 * L));
  const Real edge = L - std::abs(wrapped_shift);
  const Real edge_amplitude = g.amplitude * std::exp(-0.5 * edge * edge);
  if (edge_amplitude > 1e-12)
    throw DomainError("sample_gausson: mass too large for box, edge amplitude " + std::to_string(edge_amplitude));
  return sample(grid, [&](std::span<const Real> x, std::span<const Real>) {
    Real r2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
      Real xa = x[a] - (a == 0 ? wrapped_shift : 0.0);
      xa -= 2.0 * L * std::round(xa / (2.0 * L));
      r2 += xa * xa;
    }
    return g.amplitude * std::exp(-0.5 * r2);
  });
}

Real stationary_residual(const SpectralWorkspace& ws, const Field& u, Real lambda) {
  Field r = neg_laplacian(ws, u);
  for (Eigen::Index i = 0; i < u.samples.size(); ++i) {
    const Real rho = std::norm(u.samples[i]);
    r.samples[i] += lambda * u.samples[i] - (rho > 0.0 ? u.samples[i] * std::log(rho) : Complex(0.0));
  }
  return std::sqrt(mass(r) / mass(u));
}

} // namespace logwg
