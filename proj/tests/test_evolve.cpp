#include <doctest.h>

#include <cmath>

#include "logwg/evolve.hpp"
#include "logwg/oracle.hpp"
#include "logwg/propcheck.hpp"
#include "test_support.hpp"

using namespace logwg;

namespace {

const GridSpec kGrid{1, 1, 12.0, 128, 16};

Field standard_gausson() { return sample_gausson(kGrid, std::sqrt(testref::standard_mass())); }

Real rel_l2(const Field& a, const Field& b) { return std::sqrt(mass(Field(a.grid, a.samples - b.samples)) / mass(b)); }

Field perturbed() {
  const Field u = standard_gausson();
  return Field(kGrid, u.samples + 0.5 * random_bump(kGrid, 3).samples);
}

} // namespace

TEST_CASE("evolution config is validated") {
  EvolveConfig c;
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = EvolveConfig{};
  c.lambda_sign = 2;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = EvolveConfig{};
  c.steps = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("mass is conserved over 10^4 steps") {
  const SpectralWorkspace ws(kGrid);
  const Field u0 = perturbed();
  EvolveConfig c;
  c.dt = 1e-3;
  const Field u = propagate(ws, u0, c, 10000);
  CHECK(std::abs(mass(u) - mass(u0)) < 1e-11 * mass(u0));
}

TEST_CASE("stepping forward then backward returns the field") {
  const SpectralWorkspace ws(kGrid);
  const Field u0 = perturbed();
  for (Real eps : {0.0, 1e-2}) {
    EvolveConfig c;
    c.dt = 0.01;
    c.reg.eps_sat = eps;
    const Field fwd = step(ws, u0, c);
    c.dt = -0.01;
    CHECK(rel_l2(step(ws, fwd, c), u0) < 1e-11);
  }
}

TEST_CASE("the Gausson rotates rigidly with phase e^{+i lambda t}") {
  const SpectralWorkspace ws(kGrid);
  const Field u0 = standard_gausson();
  const Real lambda = 2.0;
  std::vector<Real> errs;
  for (Real dt : {0.01, 0.005, 0.0025}) {
    EvolveConfig c;
    c.dt = dt;
    const Field u = propagate(ws, u0, c, static_cast<int>(std::lround(1.0 / dt)));
    CHECK((u.samples.abs() - u0.samples.abs()).abs().maxCoeff() < 1e-8);
    const Field exact(kGrid, u0.samples * std::polar(1.0, lambda));
    errs.push_back(rel_l2(u, exact));
    const Field wrong(kGrid, u0.samples * std::polar(1.0, -lambda));
    CHECK(rel_l2(u, wrong) > 0.5);
  }
  const Real slope = std::log(errs.front() / errs.back()) / std::log(4.0);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("zero stays zero under the saturated nonlinearity") {
  const SpectralWorkspace ws(kGrid);
  EvolveConfig c;
  c.reg.eps_sat = 1e-3;
  const Field z = propagate(ws, Field(kGrid), c, 5);
  CHECK(z.samples.abs().maxCoeff() == 0.0);
}

TEST_CASE("conserved energy drift is second order in dt") {
  const SpectralWorkspace ws(kGrid);
  const Field u0 = perturbed();
  auto drift = [&](Real dt) {
    EvolveConfig c;
    c.dt = dt;
    c.reg.eps_sat = 1e-2;
    c.steps = static_cast<int>(std::lround(0.5 / dt));
    c.record_every = std::max(1, c.steps / 10);
    const Real e0 = conserved_energy(ws, u0, c.reg, 1);
    Real worst = 0.0;
    for (const TrajectorySample& s : evolve_trajectory(ws, u0, u0, c)) worst = std::max(worst, std::abs(s.energy - e0));
    return worst;
  };
  const Real ratio = drift(0.002) / drift(0.001);
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("conserved energy reduces to the isotropic functional without saturation") {
  const SpectralWorkspace ws(kGrid);
  const Field u = perturbed();
  CHECK(conserved_energy(ws, u, {}, 1) == doctest::Approx(energy(ws, u, 1.0).total).epsilon(1e-13));
}

TEST_CASE("saturation levels form a Cauchy-like sequence") {
  const SpectralWorkspace ws(kGrid);
  const Field u0 = perturbed();
  std::vector<Field> sols;
  for (Real eps : {1e-2, 1e-4, 1e-6}) {
    EvolveConfig c;
    c.dt = 2e-3;
    c.reg.eps_sat = eps;
    sols.push_back(propagate(ws, u0, c, 250));
  }
  CHECK(rel_l2(sols[1], sols[2]) < rel_l2(sols[0], sols[1]));
}

TEST_CASE("orbital distance vanishes on the orbit and measures small perturbations") {
  const SpectralWorkspace ws(kGrid);
  const Field u0 = standard_gausson();
  CHECK(orbital_distance(ws, Field(kGrid, u0.samples * std::polar(1.0, 0.7)), u0).distance < 1e-12);
  const std::vector<int> cells{5, 0};
  const OrbitalDistance shifted = orbital_distance(ws, shift_cells(u0, cells), u0);
  CHECK(shifted.distance < 1e-12);
  CHECK(shifted.shift[0] == 5);
  const std::vector<int> ycells{3, 4};
  CHECK(orbital_distance(ws, shift_cells(u0, ycells), u0).distance < 1e-12);

  // Bump away from the core: the H1 part dominates.
  const Field bump = sample(kGrid, [](std::span<const Real> x, std::span<const Real>) {
    return std::exp(-0.5 * (x[0] - 7.0) * (x[0] - 7.0));
  });
  const Field small(kGrid, 0.01 * bump.samples);
  const KineticSplit k = kinetic_split(ws, small);
  const Real h1 = std::sqrt(mass(small) + k.kx + k.ky);
  const OrbitalDistance d = orbital_distance(ws, Field(kGrid, u0.samples + small.samples), u0);
  CHECK(d.distance == doctest::Approx(h1).epsilon(0.2));
  CHECK_THROWS_AS(orbital_distance(ws, Field(GridSpec{1, 1, 12.0, 64, 16}), u0), DomainError);
}

TEST_CASE("unperturbed Gausson stays on its orbit up to t = 10") {
  const SpectralWorkspace ws(kGrid);
  EvolveConfig c;
  c.dt = 0.01;
  c.steps = 1000;
  c.record_every = 100;
  const StabilityReport r = stability_experiment(ws, standard_gausson(), 0.0, c);
  CHECK(r.max_distance < 1e-8);
  CHECK(r.max_mass_drift < 1e-10);
  CHECK(r.samples.size() == 11);
}

TEST_CASE("Gronwall growth bound") {
  const SpectralWorkspace ws(kGrid);
  const Field u1 = standard_gausson();
  EvolveConfig c;
  c.dt = 0.005;
  c.steps = 400;
  c.record_every = 20;
  const GronwallReport same = gronwall_check(ws, u1, u1, c);
  for (Real w : same.distances) CHECK(w < 1e-12);
  CHECK(same.holds);
  const Field u2(kGrid, u1.samples + 1e-6 * random_bump(kGrid, 4).samples);
  const GronwallReport r = gronwall_check(ws, u1, u2, c);
  CHECK(r.holds);
  CHECK(r.times.back() == doctest::Approx(2.0));
  CHECK(r.worst_ratio < 1.0);
}

TEST_CASE("pointwise increment bound on a million complex pairs") {
  CHECK(log_increment_form(Complex(0.3, -0.2), Complex(0.3, -0.2)) == 0.0);
  CHECK(log_increment_form(Complex(0.0), Complex(0.0)) == 0.0);
  CHECK(log_increment_worst_ratio(5, 1000000) <= 4.0);
}

TEST_CASE("phase resolution condition") {
  const SpectralWorkspace ws(kGrid);
  CHECK(dt_resolves_phases(ws, 1e-4));
  CHECK_FALSE(dt_resolves_phases(ws, 0.1));
}
