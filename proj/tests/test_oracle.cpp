#include <doctest.h>

#include <chrono>
#include <cmath>

#include "logwg/depscan.hpp"
#include "logwg/oracle.hpp"
#include "logwg/energy.hpp"
#include "test_support.hpp"

using namespace logwg;

TEST_CASE("multiplier and energy of the reduced Gausson") {
  const Real sp = std::sqrt(testref::pi);
  CHECK(lambda_of_mass(sp * std::exp(3.0), 1) == doctest::Approx(2.0));
  CHECK(lambda_of_mass(sp * std::exp(1.0), 1) == doctest::Approx(0.0));
  CHECK(mass_of_lambda(2.0, 1) == doctest::Approx(sp * std::exp(3.0)));
  CHECK(gausson_energy(sp * std::exp(3.0), 1) == doctest::Approx(-0.5 * sp * std::exp(3.0)));
  // Zero energy at lambda = 1.
  CHECK(std::abs(gausson_energy(sp * std::exp(2.0), 1)) < 1e-13);
  for (Real lambda : {-1.0, 0.5, 2.0, 4.0}) {
    const GaussonSpec g = GaussonSpec::from_lambda(lambda, 1);
    CHECK(g.amplitude == doctest::Approx(std::exp(0.5 * (1 + lambda))));
    CHECK(gausson_energy(g.reduced_mass, 1) == doctest::Approx(testref::line_gaussian_energy(g.amplitude)).epsilon(1e-12));
    CHECK(GaussonSpec::from_mass(g.reduced_mass, 1).lambda == doctest::Approx(lambda));
  }
  CHECK_THROWS_AS(lambda_of_mass(-1.0, 1), DomainError);
}

TEST_CASE("two-dimensional Gausson energy matches a sampled field") {
  const GridSpec g{2, 0, 10.0, 96, 8};
  const SpectralWorkspace ws(g);
  const Real m = 4.0;
  const Field u = sample_gausson(g, std::sqrt(m));
  CHECK(mass(u) == doctest::Approx(m).epsilon(1e-12));
  CHECK(energy(ws, u, 1.0).total == doctest::Approx(gausson_energy(m, 2)).epsilon(1e-11));
  CHECK(stationary_residual(ws, u, lambda_of_mass(m, 2)) < 1e-8);
}

TEST_CASE("sampled Gausson is stationary to 1e-8 at L = 12, 256 points") {
  const auto start = std::chrono::steady_clock::now();
  const GridSpec g{1, 0, 12.0, 256, 8};
  const SpectralWorkspace ws(g);
  const Real m = std::sqrt(testref::pi) * std::exp(3.0);
  const Field u = sample_gausson(g, std::sqrt(m));
  CHECK(stationary_residual(ws, u, 2.0) < 1e-8);
  const Real seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(seconds < 1.0);
}

TEST_CASE("waveguide reference value bookkeeping") {
  CHECK(reduced_reference_value(std::sqrt(testref::standard_mass()), 1, 1) ==
        doctest::Approx(testref::standard_energy()).epsilon(1e-13));
  const Real zero_mass = 2.0 * testref::pi * std::sqrt(testref::pi) * std::exp(2.0);
  CHECK(std::abs(reduced_reference_value(std::sqrt(zero_mass), 1, 1)) < 1e-12);
  const Real t2 = 50.0;
  const Real torus2 = 4.0 * testref::pi * testref::pi;
  CHECK(reduced_reference_value(std::sqrt(t2), 1, 2) == doctest::Approx(torus2 * gausson_energy(t2 / torus2, 1)));
}

TEST_CASE("sample_gausson guards the box edge and wraps shifts") {
  const GridSpec small{1, 1, 4.0, 64, 8};
  CHECK_THROWS_AS(sample_gausson(small, std::sqrt(testref::standard_mass())), DomainError);
  const GridSpec g;
  const Real theta = std::sqrt(testref::standard_mass());
  const Field a = sample_gausson(g, theta, 3.0);
  const Field b = sample_gausson(g, theta, 3.0 + 24.0);
  CHECK((a.samples - b.samples).abs().maxCoeff() < 1e-12);
  CHECK(mass(a) == doctest::Approx(testref::standard_mass()).epsilon(1e-12));
  CHECK_THROWS_AS(sample_gausson(GridSpec{0, 1, 12.0, 256, 32}, 1.0), DomainError);
}
