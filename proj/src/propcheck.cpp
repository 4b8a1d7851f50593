#include "logwg/propcheck.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "logwg/bounds.hpp"
#include "logwg/evolve.hpp"
#include "logwg/oracle.hpp"

namespace logwg {

namespace {

constexpr Real kPi = std::numbers::pi;

std::uint64_t member_seed(std::uint64_t seed, int index) {
  // splitmix64 step keeps neighbouring members decorrelated.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Field gausson_mixture(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  struct Bump {
    std::vector<Real> centre;
    Real width, amplitude, phase;
    std::vector<int> ky;
  };
  const int count = 2 + static_cast<int>(unit(rng) * 2.0);
  std::vector<Bump> bumps(static_cast<std::size_t>(count));
  for (Bump& b : bumps) {
    for (int a = 0; a < grid.d; ++a) b.centre.push_back(0.25 * grid.half_width * (2.0 * unit(rng) - 1.0));
    for (int j = 0; j < grid.n; ++j) b.ky.push_back(static_cast<int>(unit(rng) * 3.0));
    b.width = 0.7 + 0.8 * unit(rng);
    b.amplitude = 0.5 + 1.5 * unit(rng);
    b.phase = 2.0 * kPi * unit(rng);
  }
  return sample(grid, [&](std::span<const Real> x, std::span<const Real> y) {
    Complex acc = 0.0;
    for (const Bump& b : bumps) {
      Real r2 = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) r2 += (x[a] - b.centre[a]) * (x[a] - b.centre[a]);
      Real arg = b.phase;
      for (std::size_t j = 0; j < y.size(); ++j) arg += b.ky[j] * y[j];
      acc += std::polar(b.amplitude * std::exp(-0.5 * r2 / (b.width * b.width)), arg);
    }
    return acc;
  });
}

Field tent_tensor(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  const TentParams tent{0.5 + 2.3 * unit(rng), 0.05};
  const Real width = 0.7 + 0.8 * unit(rng);
  const RealArray profile = mollified_tent(tent, grid.points_y);
  return sample(grid, [&](std::span<const Real> x, std::span<const Real> y) {
    Real r2 = 0.0;
    for (Real xa : x) r2 += xa * xa;
    Real value = std::exp(-0.5 * r2 / (width * width));
    for (Real yb : y) value *= profile[static_cast<int>(std::lround(yb / grid.dy())) % grid.points_y];
    return value;
  });
}

} // namespace

std::string to_string(EnsembleKind kind) {
  switch (kind) {
  case EnsembleKind::BandLimited: return "bandlimited";
  case EnsembleKind::GaussonMixture: return "gausson-mixture";
  case EnsembleKind::TentTensor: return "tent-tensor";
  }
  return "unknown";
}

EnsembleKind ensemble_kind_from_string(const std::string& name) {
  if (name == "bandlimited") return EnsembleKind::BandLimited;
  if (name == "gausson-mixture") return EnsembleKind::GaussonMixture;
  if (name == "tent-tensor") return EnsembleKind::TentTensor;
  throw DomainError("unknown ensemble kind '" + name + "' (expected bandlimited, gausson-mixture, tent-tensor)");
}

void SampleEnsemble::validate() const {
  grid.validate();
  if (count < 1) throw DomainError("ensemble: count must be >= 1");
  if (grid.d < 1) throw DomainError("ensemble: grid needs an unbounded axis");
  if (kind == EnsembleKind::TentTensor && grid.n < 1) throw DomainError("ensemble: tent tensors need a torus axis");
}

Field SampleEnsemble::generate(int index) const {
  validate();
  if (index < 0 || index >= count) throw DomainError("ensemble: index out of range");
  const std::uint64_t s = member_seed(seed, index);
  switch (kind) {
  case EnsembleKind::BandLimited: return random_bandlimited(grid, s);
  case EnsembleKind::GaussonMixture: return gausson_mixture(grid, s);
  case EnsembleKind::TentTensor: return tent_tensor(grid, s);
  }
  throw DomainError("ensemble: unhandled kind");
}

Real brezis_lieb_residual(const Field& u, const Field& v, int shift) {
  if (!(u.grid == v.grid)) throw DomainError("brezis_lieb: grid mismatch");
  std::vector<int> cells(static_cast<std::size_t>(u.grid.rank()), 0);
  if (u.grid.d < 1) throw DomainError("brezis_lieb: grid needs an unbounded axis");
  cells[0] = shift;
  const Field vs = shift_cells(v, cells);
  const Field un(u.grid, u.samples + vs.samples);
  const RegularizationParams exact{};
  return std::abs(entropy(un, exact) - entropy(vs, exact) - entropy(u, exact));
}

SubadditivityReport subadditivity_check(Real theta1, Real theta2, const MassSolver& solver) {
  if (!(theta1 > 0.0 && theta1 < theta2)) throw DomainError("subadditivity: need 0 < theta1 < theta2");
  const FlowResult r1 = solver(theta1);
  const FlowResult r2 = solver(theta2);
  SubadditivityReport out;
  out.theta1 = theta1;
  out.theta2 = theta2;
  out.m1 = r1.energy.total;
  out.m2 = r2.energy.total;
  out.margin = out.m1 - (theta1 * theta1) / (theta2 * theta2) * out.m2;
  out.converged = r1.converged && r2.converged;
  out.positive = out.margin > -1e-8;
  return out;
}

Real reduced_margin_closed_form(Real mass1, Real mass2) { return 0.5 * mass1 * std::log(mass2 / mass1); }

Real reduced_margin_oracle(Real mass1, Real mass2, int d) {
  return gausson_energy(mass1, d) - mass1 / mass2 * gausson_energy(mass2, d);
}

Real scaling_identity_check(const SpectralWorkspace& ws, const Field& u, const std::vector<Real>& xis, Real mu) {
  const Real base = energy(ws, u, mu).total;
  const Real m = mass(u);
  Real worst = 0.0;
  for (Real xi : xis) {
    if (!(xi > 0.0)) throw DomainError("scaling: xi must be positive");
    const Real scaled = energy(ws, Field(u.grid, xi * u.samples), mu).total;
    worst = std::max(worst, std::abs(scaled - xi * xi * base + xi * xi * std::log(xi) * m));
  }
  return worst;
}

Real split_identity_max_error(std::uint64_t seed, long count, const SplitParams& split) {
  split.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  Real worst = 0.0;
  for (long i = 0; i < count; ++i) {
    const Real s = i % 2 == 0 ? unit(rng) : std::pow(10.0, -8.0 + 11.0 * unit(rng));
    const SplitValue f = f_split_eval(s, split);
    const Real s2 = s * s;
    const Real target = s2 > 0.0 ? 0.5 * s2 * std::log(s2) : 0.0;
    const Real scale = 1.0 + s2 * (1.0 + (s2 > 0.0 ? std::abs(std::log(s2)) : 0.0));
    worst = std::max(worst, std::abs(f.f2 - f.f1 - target) / scale);
  }
  return worst;
}

Real log_increment_worst_ratio(std::uint64_t seed, long count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  auto draw = [&](long i) {
    const Real r = i % 2 == 0 ? std::sqrt(unit(rng)) : std::pow(10.0, -6.0 + 9.0 * unit(rng));
    return std::polar(r, 2.0 * kPi * unit(rng));
  };
  Real worst = log_increment_form(Complex(0.3, 0.4), Complex(0.3, 0.4)); // z1 = z2
  for (long i = 0; i < count; ++i) {
    const Complex z1 = draw(i);
    const Complex z2 = draw(i + 1);
    const Real gap = std::norm(z2 - z1);
    if (gap == 0.0) continue;
    worst = std::max(worst, log_increment_form(z1, z2) / gap);
  }
  return worst;
}

GnSweep gn_sweep(const SampleEnsemble& ensemble, Real alpha) {
  ensemble.validate();
  const SpectralWorkspace ws(ensemble.grid);
  GnSweep out;
  for (int i = 0; i < ensemble.count; ++i) {
    const Real r = gn_ratio(ws, ensemble.generate(i), alpha);
    out.ratios.push_back(r);
    out.max_ratio = std::max(out.max_ratio, r);
  }
  return out;
}

} // namespace logwg
