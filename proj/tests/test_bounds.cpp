#include <doctest.h>

#include <cmath>

#include "logwg/bounds.hpp"
#include "logwg/oracle.hpp"
#include "test_support.hpp"

using namespace logwg;

namespace {

Real tent_integral(Real a, bool entropic) {
  auto f = [&](Real y) {
    const Real p = tent_profile(a, y);
    const Real p2 = p * p;
    return entropic ? (p2 > 0.0 ? p2 * std::log(p2) : 0.0) : p2;
  };
  return testref::gk(f, a, testref::pi) + testref::gk(f, testref::pi, 2.0 * testref::pi - a);
}

} // namespace

TEST_CASE("tent closed forms agree with adaptive quadrature for 20 values of a") {
  for (int i = 1; i <= 20; ++i) {
    const Real a = testref::pi * i / 21.0;
    const TentNorms t = tent_norms(a);
    CHECK(t.norm_sq == doctest::Approx(2.0 / 3.0 * std::exp(5.0 / 3.0) * (testref::pi - a)).epsilon(1e-14));
    CHECK(std::abs(t.norm_sq - tent_integral(a, false)) < 1e-9);
    CHECK(std::abs(t.entropy_int - tent_integral(a, true)) < 1e-9);
    CHECK(std::abs(t.entropy_int - t.norm_sq) < 1e-9);
  }
  CHECK(tent_norms(testref::pi - 1.0).norm_sq == doctest::Approx(3.5296600336466866).epsilon(1e-15));
  CHECK_THROWS_AS(tent_norms(4.0), DomainError);
}

TEST_CASE("bump kernel has unit mass") {
  CHECK(testref::gk(bump_kernel, -1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bump_kernel(1.0) == 0.0);
}

TEST_CASE("mollified tent keeps the support, symmetry and linear part") {
  const TentParams p{testref::pi - 1.0, 0.1};
  const MollifiedTent t(p);
  CHECK(t(p.a - p.eps_moll - 1e-9) == 0.0);
  CHECK(t(0.3) == 0.0);
  CHECK(t(2.5) == doctest::Approx(tent_profile(p.a, 2.5)));
  for (Real y : {2.0, 2.13, 2.2, 3.1})
    CHECK(t(y) == doctest::Approx(t(2.0 * testref::pi - y)).epsilon(1e-14));
  CHECK(t(testref::pi) < tent_profile(p.a, testref::pi));
  auto sq = [&](Real y) { return t(y) * t(y); };
  // Each sample of t is itself a quadrature, so the reference stops at 1e-12.
  const Real ref = testref::gk(sq, p.a - p.eps_moll, p.a + p.eps_moll, 1e-12) +
                   testref::gk(sq, p.a + p.eps_moll, testref::pi - p.eps_moll, 1e-12) +
                   testref::gk(sq, testref::pi - p.eps_moll, testref::pi, 1e-12);
  CHECK(t.norm_sq() == doctest::Approx(2.0 * ref).epsilon(1e-10));
  CHECK_THROWS_AS((TentParams{0.1, 0.1}.validate()), DomainError);
}

TEST_CASE("mollified norms converge to the tent norms") {
  const Real a = testref::pi - 1.0;
  const Real exact = tent_norms(a).norm_sq;
  Real previous = 1.0;
  for (Real eps : {1e-1, 1e-2, 1e-3}) {
    const Real err = std::abs(MollifiedTent({a, eps}).norm_sq() - exact);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(MollifiedTent({a, 1e-3}).norm_sq() == doctest::Approx(3.529658360092207).epsilon(1e-12));
  // Narrow tent where the two kink windows overlap.
  const MollifiedTent narrow({testref::pi - 0.15, 0.1});
  CHECK(std::isfinite(narrow.norm_sq()));
  CHECK(narrow.norm_sq() > 0.0);
}

TEST_CASE("tensor test field carries mass theta^2") {
  const GridSpec g{1, 1, 12.0, 128, 64};
  const Real theta = 5.0;
  const Field psi = tensor_testfield(theta, {testref::pi - 1.0, 0.1}, g);
  CHECK(mass(psi) == doctest::Approx(theta * theta).epsilon(1e-6));
}

TEST_CASE("tent bound correction and its limit") {
  const Real theta = std::sqrt(testref::standard_mass());
  const TentBound b = tent_bound(theta, {testref::pi - 1.0, 1e-3}, 1, 1);
  CHECK(b.correction_limit == doctest::Approx(-0.5 * theta * theta));
  CHECK(b.main_term == doctest::Approx(b.norm_sq * gausson_energy(theta * theta / b.norm_sq, 1)));
  CHECK(b.i0 == doctest::Approx(b.main_term + b.correction));
  CHECK(b.reference == doctest::Approx(testref::standard_energy()));
  // Mollification error shrinks like eps^2.
  Real previous = 1e300;
  for (Real eps : {1e-1, 1e-2, 1e-3}) {
    const TentBound r = tent_bound(theta, {testref::pi - 1.0, eps}, 1, 1);
    const Real err = std::abs(r.correction - r.correction_limit);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-5 * theta * theta);
  const auto rows = upper_bound_I0(theta, {1.0, 2.0, 3.0}, 1e-2, 1, 1);
  CHECK(rows.size() == 3);
}

TEST_CASE("eigenfunction test field energies") {
  CHECK(mean_log_sine_squared() == doctest::Approx(1.0 - 2.0 * std::log(2.0)).epsilon(1e-12));
  const EigenBoxParams p{1, 1, 2.0, 3.0};
  CHECK(p.eigenvalue() == doctest::Approx(testref::pi * testref::pi / 4.0));
  // Direct quadrature of I(phi_r) for phi_r = A r^{-1/2} sin(pi x / (ell r)) on (0, ell r).
  for (Real r : {0.3, 1.0, 2.5}) {
    const Real theta2 = p.theta * p.theta;
    const Real amp = std::sqrt(theta2 / (0.5 * p.ell * 2.0 * testref::pi) / r);
    const Real k = testref::pi / (p.ell * r);
    auto density = [&](Real x) {
      const Real u = amp * std::sin(k * x);
      const Real du = amp * k * std::cos(k * x);
      const Real u2 = u * u;
      return 0.5 * du * du + 0.5 * u2 - (u2 > 0.0 ? 0.5 * u2 * std::log(u2) : 0.0);
    };
    const Real direct = 2.0 * testref::pi * testref::gk(density, 0.0, p.ell * r);
    CHECK(eigen_testfield_energy(p, r) == doctest::Approx(direct).epsilon(1e-10));
  }
  const auto rows = eigen_testfield_scan(p, {0.1, 1.0});
  CHECK(rows[0].lower_printed == doctest::Approx(std::sqrt(2.0 / p.eigenvalue())));
  CHECK(rows[0].lower_rederived == doctest::Approx(std::sqrt(2.0 * p.eigenvalue())));
  CHECK_THROWS_AS(eigen_testfield_energy(p, -1.0), DomainError);
}
