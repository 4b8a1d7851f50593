#include "logwg/gradflow.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "logwg/bounds.hpp"
#include "logwg/oracle.hpp"

namespace logwg {

namespace {

// Cap on the pointwise damping -log|u|^2 inside the preconditioner, so that
// samples at exact zero still receive kinetic coupling.
constexpr Real kMaxPotential = 700.0;

// Two energies closer than this multiple of the summed term magnitudes are
// equal up to rounding.
constexpr Real kRoundoffFactor = 256.0 * std::numeric_limits<Real>::epsilon();

Real energy_scale(const EnergyBreakdown& e) {
  return std::abs(e.kinetic_x) + std::abs(e.kinetic_y_weighted) + std::abs(e.l2_half) + std::abs(e.entropy_half);
}

Field precondition(const SpectralWorkspace& ws, const Field& r, const Field& u, Real mu,
                   const RegularizationParams& reg) {
  const RealArray rho = u.samples.abs2();
  RealArray damp(rho.size());
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    const Real w = std::clamp(-std::log(std::max(reg.eps_sat + rho[i], std::exp(-kMaxPotential))), 0.0, kMaxPotential);
    damp[i] = 1.0 / std::sqrt(1.0 + w);
  }
  ComplexArray hat = ws.forward(r.samples * damp.cast<Complex>());
  hat /= (1.0 + ws.ksq_x() + mu * ws.ksq_y()).cast<Complex>();
  return Field(u.grid, ws.inverse(hat) * damp.cast<Complex>());
}

} // namespace

std::string to_string(InitKind kind) {
  switch (kind) {
  case InitKind::Gausson: return "gausson";
  case InitKind::GaussonTimesTent: return "gausson-tent";
  case InitKind::RandomBandlimited: return "random";
  case InitKind::File: return "file";
  }
  return "unknown";
}

InitKind init_kind_from_string(const std::string& name) {
  if (name == "gausson") return InitKind::Gausson;
  if (name == "gausson-tent") return InitKind::GaussonTimesTent;
  if (name == "random") return InitKind::RandomBandlimited;
  if (name == "file") return InitKind::File;
  throw DomainError("unknown init kind '" + name + "' (expected gausson, gausson-tent, random, file)");
}

void FlowConfig::validate() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("flow: theta must be positive");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("flow: mu must be >= 0");
  reg.validate();
  if (!(dt_min > 0.0) || !(dt0 > dt_min) || !(dt_max >= dt0)) throw DomainError("flow: need dt_max >= dt0 > dt_min > 0");
  if (!(tol > 0.0)) throw DomainError("flow: tol must be positive");
  if (max_steps < 0) throw DomainError("flow: max_steps must be >= 0");
  if (restarts < 1) throw DomainError("flow: restarts must be >= 1");
  if (init == InitKind::File && !initial) throw DomainError("flow: init=file needs an initial field");
}

Real LambdaEstimates::gap() const { return std::abs(rayleigh - energy); }

Field random_bandlimited(const GridSpec& grid, std::uint64_t seed) {
  grid.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> torus_mode(-3, 3);
  constexpr int kModes = 8;
  struct Mode {
    std::vector<Real> kx;
    std::vector<int> ky;
    Real phase, weight;
  };
  std::vector<Mode> modes(kModes);
  for (Mode& m : modes) {
    for (int a = 0; a < grid.d; ++a) m.kx.push_back(2.0 * unit(rng));
    for (int b = 0; b < grid.n; ++b) m.ky.push_back(torus_mode(rng));
    m.phase = std::numbers::pi * unit(rng);
    m.weight = unit(rng);
  }
  std::vector<Real> centre(static_cast<std::size_t>(grid.d));
  for (Real& c : centre) c = unit(rng);
  Real total_weight = 0.0;
  for (const Mode& m : modes) total_weight += std::abs(m.weight);

  return sample(grid, [&](std::span<const Real> x, std::span<const Real> y) {
    Real r2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) r2 += (x[a] - centre[a]) * (x[a] - centre[a]);
    Real p = 0.0;
    for (const Mode& m : modes) {
      Real arg = m.phase;
      for (std::size_t a = 0; a < x.size(); ++a) arg += m.kx[a] * x[a];
      for (std::size_t b = 0; b < y.size(); ++b) arg += m.ky[b] * y[b];
      p += m.weight * std::cos(arg);
    }
    // |p| / total_weight <= 1, so the modulation stays positive.
    return std::exp(-r2 / 4.5) * (1.0 + 0.5 * p / total_weight);
  });
}

Field initial_field(const GridSpec& grid, const FlowConfig& config, std::uint64_t seed) {
  switch (config.init) {
  case InitKind::Gausson:
    return normalize(sample_gausson(grid, config.theta), config.theta);
  case InitKind::GaussonTimesTent: {
    TentParams tent{std::numbers::pi / 2.0, 0.1};
    return normalize(tensor_testfield(config.theta, tent, grid), config.theta);
  }
  case InitKind::RandomBandlimited:
    return normalize(random_bandlimited(grid, seed), config.theta);
  case InitKind::File:
    if (!(config.initial->grid == grid)) throw DomainError("flow: initial field grid does not match");
    return normalize(*config.initial, config.theta);
  }
  throw DomainError("flow: unhandled init kind");
}

LambdaEstimates lambda_estimates(const SpectralWorkspace& ws, const Field& u, Real mu,
                                 const RegularizationParams& reg, Real m, Real theta) {
  const Field g = first_variation(ws, u, mu, reg);
  const Real theta2 = theta * theta;
  return {-inner(g, u) / theta2, 1.0 - 2.0 * m / theta2};
}

Real pohozaev_residual(const SpectralWorkspace& ws, const Field& u, Real theta) {
  return kinetic_split(ws, u).kx - 0.5 * u.grid.d * theta * theta;
}

Real constrained_residual(const SpectralWorkspace& ws, const Field& u, Real mu, const RegularizationParams& reg) {
  const Field g = first_variation(ws, u, mu, reg);
  const Real m = mass(u);
  const Real lambda = -inner(g, u) / m;
  return std::sqrt(mass(Field(u.grid, g.samples + lambda * u.samples)) / m);
}

FlowResult descend(const SpectralWorkspace& ws, const Field& start, const FlowConfig& config) {
  config.validate();
  const Real theta2 = config.theta * config.theta;
  Field u = normalize(start, config.theta);
  EnergyAndGradient eg = energy_and_gradient(ws, u, config.mu, config.reg);

  FlowResult result;
  result.energy_history.push_back(eg.energy.total);
  Real dt = config.dt0;
  Real lambda = 0.0;
  int step = 0;
  for (;; ++step) {
    lambda = -inner(eg.gradient, u) / theta2;
    Field r(u.grid, eg.gradient.samples + lambda * u.samples);
    result.residual = std::sqrt(mass(r) / theta2);
    if (result.residual < config.tol) {
      result.converged = true;
      break;
    }
    if (step >= config.max_steps) break;

    const Field dir = precondition(ws, r, u, config.mu, config.reg);
    bool accepted = false;
    while (!accepted && dt >= config.dt_min) {
      Field trial(u.grid, u.samples - dt * dir.samples);
      const Real trial_mass = mass(trial);
      if (!std::isfinite(trial_mass)) throw DomainError("flow: mass blow-up");
      trial = normalize(trial, config.theta);
      EnergyAndGradient next = energy_and_gradient(ws, trial, config.mu, config.reg);
      const Real slack = kRoundoffFactor * energy_scale(eg.energy);
      bool descent = std::isfinite(next.energy.total) && next.energy.total <= eg.energy.total + slack;
      // Inside the rounding band the energy cannot rank the two iterates;
      // the constrained residual has to drop instead.
      if (descent && next.energy.total > eg.energy.total - slack) {
        const Real next_lambda = -inner(next.gradient, trial) / theta2;
        const Field next_r(u.grid, next.gradient.samples + next_lambda * trial.samples);
        descent = std::sqrt(mass(next_r) / theta2) < result.residual;
      }
      if (descent) {
        u = std::move(trial);
        eg = std::move(next);
        result.energy_history.push_back(eg.energy.total);
        accepted = true;
        dt = std::min(1.5 * dt, config.dt_max);
      } else {
        dt *= 0.5;
      }
    }
    if (!accepted) break;
  }

  result.steps = step;
  result.energy = eg.energy;
  result.lambda_rayleigh = lambda;
  result.lambda_energy = 1.0 - 2.0 * eg.energy.total / theta2;
  result.boundary_mass = boundary_mass(u);
  result.field = std::move(u);
  return result;
}

FlowResult minimize(const FlowConfig& config, const GridSpec& grid) {
  config.validate();
  const SpectralWorkspace ws(grid);
  const int runs = config.init == InitKind::RandomBandlimited ? config.restarts : 1;
  FlowResult best;
  bool have_best = false;
  for (int i = 0; i < runs; ++i) {
    FlowResult run = descend(ws, initial_field(grid, config, config.seed + static_cast<std::uint64_t>(i)), config);
    if (!have_best) {
      best = std::move(run);
      have_best = true;
      continue;
    }
    const Real tie = 1e-10 * std::max(1.0, std::abs(best.energy.total));
    const bool lower = run.energy.total < best.energy.total - tie;
    const bool tied = std::abs(run.energy.total - best.energy.total) <= tie;
    if (lower || (tied && run.energy.kinetic_y_weighted < best.energy.kinetic_y_weighted)) best = std::move(run);
  }
  return best;
}

} // namespace logwg
