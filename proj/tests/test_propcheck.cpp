#include <doctest.h>

#include <cmath>

#include "logwg/oracle.hpp"
#include "logwg/propcheck.hpp"
#include "test_support.hpp"

using namespace logwg;

namespace {

const GridSpec kGrid{1, 1, 12.0, 128, 16};

Real entropy_exact(const Field& u) { return entropy(u, {}); }

} // namespace

TEST_CASE("ensembles are reproducible and distinct per member") {
  for (EnsembleKind k : {EnsembleKind::BandLimited, EnsembleKind::GaussonMixture, EnsembleKind::TentTensor}) {
    CHECK(ensemble_kind_from_string(to_string(k)) == k);
    const SampleEnsemble e{42, 4, k, kGrid};
    const Field a = e.generate(1), b = e.generate(1), c = e.generate(2);
    CHECK((a.samples - b.samples).abs().maxCoeff() == 0.0);
    CHECK((a.samples - c.samples).abs().maxCoeff() > 0.0);
    CHECK(boundary_mass(a) < 1e-10 * mass(a));
    CHECK_THROWS_AS(e.generate(4), DomainError);
  }
  CHECK_THROWS_AS((SampleEnsemble{1, 1, EnsembleKind::TentTensor, GridSpec{1, 0, 12.0, 64, 8}}.validate()), DomainError);
}

TEST_CASE("Brezis-Lieb residual for separating Gaussons") {
  const Field u = sample_gausson(kGrid, 1.0);
  CHECK(brezis_lieb_residual(u, Field(kGrid), 17) == 0.0);
  const int quarter = static_cast<int>(std::lround(0.25 * kGrid.half_width / kGrid.dx()));
  const Real r1 = brezis_lieb_residual(u, u, quarter);
  const Real r2 = brezis_lieb_residual(u, u, 2 * quarter);
  const Real r3 = brezis_lieb_residual(u, u, 3 * quarter);
  CHECK(r1 > r2);
  CHECK(r2 > r3);
  // Zero separation: |int 4u^2 log 4u^2 - 2 int u^2 log u^2|.
  const Real direct = std::abs(entropy_exact(Field(kGrid, 2.0 * u.samples)) - 2.0 * entropy_exact(u));
  CHECK(brezis_lieb_residual(u, u, 0) == doctest::Approx(direct).epsilon(1e-13));
  CHECK(direct > 0.1);
}

TEST_CASE("reduced subadditivity margin in closed form") {
  for (auto [m1, m2] : {std::pair{1.0, 2.0}, std::pair{3.0, 30.0}, std::pair{0.2, 0.21}}) {
    const Real closed = reduced_margin_closed_form(m1, m2);
    CHECK(closed > 0.0);
    for (int d : {1, 2, 3}) CHECK(reduced_margin_oracle(m1, m2, d) == doctest::Approx(closed).epsilon(1e-12));
  }
  const Real t2 = 5.0;
  const Real t1 = t2 * (1.0 - 1e-6) * (1.0 - 1e-6);
  CHECK(reduced_margin_closed_form(t1, t2) == doctest::Approx(0.5 * t1 * 2e-6).epsilon(1e-5));
}

TEST_CASE("waveguide subadditivity measured by the flow") {
  const MassSolver solver = [](Real theta) {
    FlowConfig f;
    f.theta = theta;
    f.mu = 1.0;
    f.restarts = 2;
    // The y-localized branch needs 32 samples across the torus.
    return minimize(f, GridSpec{1, 1, 12.0, 128, 32});
  };
  const Real t2 = testref::standard_mass();
  const SubadditivityReport r = subadditivity_check(std::sqrt(0.5 * t2), std::sqrt(t2), solver);
  CHECK(r.converged);
  CHECK(r.margin > -1e-8);
  CHECK(r.positive);
  CHECK_THROWS_AS(subadditivity_check(2.0, 1.0, solver), DomainError);
}

TEST_CASE("energy scaling identity") {
  const SpectralWorkspace ws(kGrid);
  const Field u = SampleEnsemble{7, 1, EnsembleKind::GaussonMixture, kGrid}.generate(0);
  const Real base = energy(ws, u, 1.0).total;
  CHECK(scaling_identity_check(ws, u, {1.0}) < 1e-12 * (1.0 + std::abs(base)));
  CHECK(scaling_identity_check(ws, u, {std::numbers::e}) < 1e-10 * (1.0 + std::abs(base)));
  // Gausson cross-check against the oracle energy.
  const Field g = sample_gausson(kGrid, std::sqrt(testref::standard_mass()));
  const Real xi = 0.5;
  const Real expected = xi * xi * testref::standard_energy() - xi * xi * std::log(xi) * testref::standard_mass();
  CHECK(energy(ws, Field(kGrid, xi * g.samples), 1.0).total == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(scaling_identity_check(ws, u, {-1.0}), DomainError);
}

TEST_CASE("split identity sampler") {
  CHECK(split_identity_max_error(3, 1000000) < 1e-12);
}

TEST_CASE("Gagliardo-Nirenberg quotient of a Gausson in closed form") {
  const Field u = sample_gausson(kGrid, 3.0);
  const Real c = u.samples.abs().maxCoeff();
  const Real alpha = 1.0, p = 2.0 + alpha, t = gn_theta(1, 1, alpha);
  const Real tw = 2.0 * testref::pi;
  const Real lp = std::pow(c, p) * std::sqrt(2.0 * testref::pi / p) * tw;
  const Real m = c * c * std::sqrt(testref::pi) * tw;
  const Real kx = 0.5 * m;
  const Real closed = lp / (std::pow(std::sqrt(m + kx), t) * std::pow(std::sqrt(m), p - t));
  const SpectralWorkspace ws(kGrid);
  CHECK(gn_ratio(ws, u, alpha) == doctest::Approx(closed).epsilon(1e-8));

  const GnSweep s = gn_sweep(SampleEnsemble{1, 100, EnsembleKind::BandLimited, kGrid}, 1.0);
  CHECK(s.ratios.size() == 100);
  CHECK(std::isfinite(s.max_ratio));
  CHECK(s.max_ratio > 0.0);
}
