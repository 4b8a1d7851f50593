#include "logwg/evolve.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace logwg {

namespace {

ComplexArray kinetic_phase(const SpectralWorkspace& ws, Real tau) {
  const RealArray ksq = ws.ksq_x() + ws.ksq_y();
  ComplexArray out(ksq.size());
  for (Eigen::Index i = 0; i < ksq.size(); ++i) out[i] = std::polar(1.0, -ksq[i] * tau);
  return out;
}

void nonlinear_phase(ComplexArray& u, Real dt, int lambda_sign, Real eps) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const Real rho = eps + std::norm(u[i]);
    if (rho == 0.0) continue; // zero stays zero
    u[i] *= std::polar(1.0, dt * lambda_sign * std::log(rho));
  }
}

Real h1_norm_sq(const SpectralWorkspace& ws, const Field& f) {
  const KineticSplit k = kinetic_split(ws, f);
  return mass(f) + k.kx + k.ky;
}

Real f1_integral(const Field& u, const SplitParams& split) {
  Real acc = 0.0;
  for (Eigen::Index i = 0; i < u.samples.size(); ++i) acc += f_split_eval(std::abs(u.samples[i]), split).f1;
  return acc * u.grid.cell_volume();
}

std::vector<int> unflatten(const GridSpec& g, Eigen::Index flat) {
  std::vector<int> idx(static_cast<std::size_t>(g.rank()));
  for (int a = g.rank() - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % g.extent(a));
    flat /= g.extent(a);
  }
  return idx;
}

TrajectorySample observe(const SpectralWorkspace& ws, const Field& u, const Field& reference,
                         const EvolveConfig& config, Real t) {
  TrajectorySample s;
  s.t = t;
  s.mass = mass(u);
  s.energy = conserved_energy(ws, u, config.reg, config.lambda_sign);
  s.orbital_distance = orbital_distance(ws, u, reference).distance;
  s.boundary_mass = boundary_mass(u);
  return s;
}

} // namespace

void EvolveConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("evolve: dt must be positive");
  if (steps < 1) throw DomainError("evolve: steps must be >= 1");
  if (lambda_sign != 1 && lambda_sign != -1) throw DomainError("evolve: lambda_sign must be +1 or -1");
  if (record_every < 1) throw DomainError("evolve: record_every must be >= 1");
  reg.validate();
}

bool dt_resolves_phases(const SpectralWorkspace& ws, Real dt) {
  return std::abs(dt) * ws.max_ksq() <= 0.25 * std::numbers::pi;
}

Field step(const SpectralWorkspace& ws, const Field& u, const EvolveConfig& config) {
  return propagate(ws, u, config, 1);
}

Field propagate(const SpectralWorkspace& ws, const Field& u, const EvolveConfig& config, int count) {
  if (!(u.grid == ws.grid())) throw DomainError("evolve: field grid does not match workspace");
  if (count < 0) throw DomainError("evolve: negative step count");
  if (count == 0) return u;
  // dt may be negative here; backward stepping is the exact inverse.
  const ComplexArray half = kinetic_phase(ws, 0.5 * config.dt);
  const ComplexArray full = half * half;
  ComplexArray hat = ws.forward(u.samples) * half;
  for (int s = 0; s < count; ++s) {
    ComplexArray v = ws.inverse(hat);
    nonlinear_phase(v, config.dt, config.lambda_sign, config.reg.eps_sat);
    hat = ws.forward(v) * (s + 1 == count ? half : full);
  }
  Field out(u.grid, ws.inverse(hat));
  if (!out.all_finite()) throw DomainError("evolve: non-finite samples");
  return out;
}

Real conserved_energy(const SpectralWorkspace& ws, const Field& u, const RegularizationParams& reg, int lambda_sign) {
  const KineticSplit k = kinetic_split(ws, u);
  const Real eps = reg.eps_sat;
  const Real eps_log_eps = eps > 0.0 ? eps * std::log(eps) : 0.0;
  Real g = 0.0;
  for (Eigen::Index i = 0; i < u.samples.size(); ++i) {
    const Real r = std::norm(u.samples[i]);
    const Real s = eps + r;
    g += (s > 0.0 ? s * std::log(s) : 0.0) - r - eps_log_eps;
  }
  g *= u.grid.cell_volume();
  return 0.5 * (k.kx + k.ky) - 0.5 * lambda_sign * g;
}

OrbitalDistance orbital_distance(const SpectralWorkspace& ws, const Field& psi, const Field& u0,
                                 const SplitParams& split) {
  if (!(psi.grid == u0.grid) || !(psi.grid == ws.grid())) throw DomainError("orbital_distance: grid mismatch");
  const RealArray weight = 1.0 + ws.ksq_x() + ws.ksq_y();
  const ComplexArray cross = ws.inverse(ws.forward(u0.samples).conjugate() * ws.forward(psi.samples) *
                                        weight.cast<Complex>());
  Eigen::Index best = 0;
  cross.abs2().maxCoeff(&best);

  OrbitalDistance out;
  out.shift = unflatten(psi.grid, best);
  out.phase = std::arg(cross[best]);
  const Field moved = shift_cells(u0, out.shift);
  const Field diff(psi.grid, psi.samples - std::polar(1.0, out.phase) * moved.samples);
  out.h1 = std::sqrt(std::max(0.0, h1_norm_sq(ws, diff)));
  out.f1_gap = std::abs(f1_integral(psi, split) - f1_integral(u0, split));
  out.distance = out.h1 + out.f1_gap;
  return out;
}

std::vector<TrajectorySample> evolve_trajectory(const SpectralWorkspace& ws, const Field& u, const Field& reference,
                                                const EvolveConfig& config, const StepObserver& observer) {
  config.validate();
  std::vector<TrajectorySample> samples;
  Field cur = u;
  samples.push_back(observe(ws, cur, reference, config, 0.0));
  if (observer) observer(0, cur);
  int done = 0;
  while (done < config.steps) {
    const int chunk = std::min(config.record_every, config.steps - done);
    cur = propagate(ws, cur, config, chunk);
    done += chunk;
    samples.push_back(observe(ws, cur, reference, config, done * config.dt));
    if (observer) observer(done, cur);
  }
  return samples;
}

Field random_bump(const GridSpec& grid, std::uint64_t seed) {
  grid.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unit(-1.0, 1.0);
  std::vector<Real> cx(static_cast<std::size_t>(grid.d)), cy(static_cast<std::size_t>(grid.n));
  for (Real& c : cx) c = 0.25 * grid.half_width * unit(rng);
  for (Real& c : cy) c = std::numbers::pi * (1.0 + unit(rng));
  const Real phase = std::numbers::pi * unit(rng);
  return sample(grid, [&](std::span<const Real> x, std::span<const Real> y) {
    Real q = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) q += 0.5 * (x[a] - cx[a]) * (x[a] - cx[a]);
    for (std::size_t b = 0; b < y.size(); ++b) {
      const Real s = std::sin(0.5 * (y[b] - cy[b]));
      q += 2.0 * s * s;
    }
    return std::polar(std::exp(-q), phase);
  });
}

StabilityReport stability_experiment(const SpectralWorkspace& ws, const Field& u0, Real delta,
                                     const EvolveConfig& config, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw DomainError("stability: perturbation size must be >= 0");
  const Field bump = random_bump(u0.grid, seed);
  const Real scale = delta / std::sqrt(h1_norm_sq(ws, bump));
  const Field start(u0.grid, u0.samples + scale * bump.samples);
  StabilityReport report;
  report.samples = evolve_trajectory(ws, start, u0, config);
  const TrajectorySample& first = report.samples.front();
  report.initial_distance = first.orbital_distance;
  for (const TrajectorySample& s : report.samples) {
    report.max_distance = std::max(report.max_distance, s.orbital_distance);
    report.max_mass_drift = std::max(report.max_mass_drift, std::abs(s.mass - first.mass) / first.mass);
    report.max_energy_drift =
        std::max(report.max_energy_drift, std::abs(s.energy - first.energy) / std::max(1.0, std::abs(first.energy)));
  }
  return report;
}

GronwallReport gronwall_check(const SpectralWorkspace& ws, const Field& u1, const Field& u2,
                              const EvolveConfig& config, Real tol_growth) {
  config.validate();
  if (!(u1.grid == u2.grid)) throw DomainError("gronwall: grid mismatch");
  GronwallReport report;
  const Real w0 = std::sqrt(mass(Field(u1.grid, u2.samples - u1.samples)));
  Field a = u1, b = u2;
  auto record = [&](Real t) {
    const Real w = std::sqrt(mass(Field(a.grid, b.samples - a.samples)));
    const Real bound = std::exp(4.0 * t) * w0;
    report.times.push_back(t);
    report.distances.push_back(w);
    report.bounds.push_back(bound * (1.0 + tol_growth));
    if (w > bound * (1.0 + tol_growth)) report.holds = false;
    if (t > 0.0 && bound > 0.0) report.worst_ratio = std::max(report.worst_ratio, w / bound);
  };
  record(0.0);
  int done = 0;
  while (done < config.steps) {
    const int chunk = std::min(config.record_every, config.steps - done);
    a = propagate(ws, a, config, chunk);
    b = propagate(ws, b, config, chunk);
    done += chunk;
    record(done * config.dt);
  }
  return report;
}

Real log_increment_form(Complex z1, Complex z2) {
  auto g = [](Complex z) {
    const Real r = std::norm(z);
    return r == 0.0 ? Complex(0.0) : z * std::log(r);
  };
  return std::abs(std::imag((g(z2) - g(z1)) * std::conj(z2 - z1)));
}

} // namespace logwg
