#include <doctest.h>

#include <cmath>
#include <vector>

#include "logwg/domain.hpp"
#include "test_support.hpp"

using namespace logwg;

namespace {

Field gaussian(const GridSpec& g) {
  return sample(g, [](std::span<const Real> x, std::span<const Real>) {
    Real r2 = 0.0;
    for (Real v : x) r2 += v * v;
    return std::exp(-0.5 * r2);
  });
}

} // namespace

TEST_CASE("grid geometry and validation") {
  GridSpec g;
  CHECK(g.dx() == doctest::Approx(24.0 / 256));
  CHECK(g.dy() == doctest::Approx(2.0 * testref::pi / 32));
  CHECK(g.size() == 256 * 32);
  CHECK(g.box_volume() == doctest::Approx(24.0 * 2.0 * testref::pi));
  CHECK(coordinate(g, 0, 0) == -12.0);
  CHECK(coordinate(g, 1, 16) == doctest::Approx(testref::pi));

  GridSpec bad = g;
  bad.points_x = 7;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = g;
  bad.half_width = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = g;
  bad.d = 0;
  bad.n = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(Field(g, ComplexArray::Zero(5)), DomainError);
}

TEST_CASE("samples are row-major with the torus axis fastest") {
  GridSpec g{1, 1, 4.0, 8, 8};
  const Field f = sample(g, [](std::span<const Real> x, std::span<const Real> y) { return x[0] + 100.0 * y[0]; });
  CHECK(f.samples[1].real() == doctest::Approx(-4.0 + 100.0 * g.dy()));
  CHECK(f.samples[8].real() == doctest::Approx(-4.0 + g.dx()));
}

TEST_CASE("trapezoid mass of a Gaussian is spectrally accurate") {
  const GridSpec g;
  const SpectralWorkspace ws(g);
  const Field u = gaussian(g);
  const Real exact = 2.0 * testref::pi * std::sqrt(testref::pi);
  CHECK(exact == doctest::Approx(11.1366).epsilon(1e-4));
  CHECK(std::abs(mass(u) - exact) < 1e-12 * exact);
  CHECK(std::abs(mass_spectral(ws, u) - mass(u)) < 1e-12 * exact);
  const KineticSplit k = kinetic_split(ws, u);
  CHECK(std::abs(k.kx - 0.5 * exact) < 1e-11);
  CHECK(std::abs(k.ky) < 1e-20);
}

TEST_CASE("negative Laplacian acts diagonally on plane waves") {
  const GridSpec g{1, 1, 6.0, 64, 16};
  const SpectralWorkspace ws(g);
  const Real kx = 3.0 * testref::pi / g.half_width;
  const Field u = sample(g, [&](std::span<const Real> x, std::span<const Real> y) {
    return std::polar(1.0, kx * x[0]) * std::cos(3.0 * y[0]);
  });
  const Real mu = 2.5;
  const Field lu = neg_laplacian(ws, u, mu);
  CHECK((lu.samples - (kx * kx + mu * 9.0) * u.samples).abs().maxCoeff() < 1e-10);
  const Field ly = neg_laplacian_y(ws, u);
  CHECK((ly.samples - 9.0 * u.samples).abs().maxCoeff() < 1e-10);
  const Field sy = sqrt_neg_laplacian_y(ws, u);
  CHECK((sy.samples - 3.0 * u.samples).abs().maxCoeff() < 1e-10);
  // Parseval for the half derivative.
  CHECK(mass(sy) == doctest::Approx(kinetic_split(ws, u).ky).epsilon(1e-12));
}

TEST_CASE("forward and inverse transforms round-trip") {
  const GridSpec g{2, 1, 5.0, 16, 8};
  const SpectralWorkspace ws(g);
  ComplexArray a = ComplexArray::Random(g.size());
  CHECK((ws.inverse(ws.forward(a)) - a).abs().maxCoeff() < 1e-13);
}

TEST_CASE("normalize, inner and shifts") {
  const GridSpec g{1, 1, 8.0, 64, 8};
  const Field u = gaussian(g);
  const Field v = normalize(u, 3.0);
  CHECK(mass(v) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(inner(v, v) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK_THROWS_AS(normalize(Field(g), 1.0), DomainError);

  const std::vector<int> fwd{5, 3}, back{-5, -3};
  const Field s = shift_cells(shift_cells(u, fwd), back);
  CHECK((s.samples - u.samples).abs().maxCoeff() == 0.0);
  const Field moved = shift_cells(u, fwd);
  // out(x) = u(x - shift)
  CHECK(moved.samples[(32 + 5) * 8 + 3] == u.samples[32 * 8]);
  CHECK_THROWS_AS(shift_cells(u, std::vector<int>{1}), DomainError);
}

TEST_CASE("boundary mass sees only the outer tenth") {
  const GridSpec g{1, 1, 10.0, 128, 8};
  CHECK(boundary_mass(gaussian(g)) < 1e-30);
  const Field edge = sample(g, [](std::span<const Real> x, std::span<const Real>) {
    return std::abs(x[0]) >= 9.5 ? 1.0 : 0.0;
  });
  CHECK(boundary_mass(edge) == doctest::Approx(mass(edge)));
}
