#ifndef LOGWG_DOMAIN_HPP
#define LOGWG_DOMAIN_HPP

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace logwg {

typedef double Real;
typedef std::complex<Real> Complex;
typedef Eigen::Array<Real, Eigen::Dynamic, 1> RealArray;
typedef Eigen::Array<Complex, Eigen::Dynamic, 1> ComplexArray;

/// Thrown when a grid, field or parameter set violates its invariants.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform discretization of R^d x T^n.
///
/// The unbounded axes are truncated to [-L, L) with periodic wrap, the torus
/// axes have period 2*pi. Axes are ordered x-axes then y-axes, row-major.
struct GridSpec {
  int d = 1;
  int n = 1;
  Real half_width = 12.0;
  int points_x = 256;
  int points_y = 32;

  int rank() const { return d + n; }
  Real dx() const { return 2.0 * half_width / points_x; }
  Real dy() const;
  /// Quadrature weight of one sample, dx^d * dy^n.
  Real cell_volume() const;
  Eigen::Index size() const;
  /// Sample count along axis `axis` (x-axes first).
  int extent(int axis) const { return axis < d ? points_x : points_y; }
  /// Volume of the periodic box, (2L)^d (2 pi)^n.
  Real box_volume() const;

  /// Throws DomainError when the invariants do not hold.
  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

/// Coordinate of sample `i` along axis `axis`.
Real coordinate(const GridSpec& grid, int axis, int i);

/// Complex samples of a function on a grid.
struct Field {
  GridSpec grid;
  ComplexArray samples;

  Field() = default;
  explicit Field(const GridSpec& g);
  Field(const GridSpec& g, ComplexArray s);

  bool all_finite() const;
};

/// Sample `f(x, y)` on every grid point; `x` has d entries and `y` has n.
template <class Fn>
Field sample(const GridSpec& grid, Fn&& f) {
  grid.validate();
  Field out(grid);
  const int rank = grid.rank();
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  std::vector<Real> x(static_cast<std::size_t>(grid.d));
  std::vector<Real> y(static_cast<std::size_t>(grid.n));
  for (Eigen::Index flat = 0; flat < out.samples.size(); ++flat) {
    for (int a = 0; a < grid.d; ++a) x[a] = coordinate(grid, a, idx[a]);
    for (int b = 0; b < grid.n; ++b) y[b] = coordinate(grid, grid.d + b, idx[grid.d + b]);
    out.samples[flat] = Complex(f(std::span<const Real>(x), std::span<const Real>(y)));
    for (int a = rank - 1; a >= 0; --a) {
      if (++idx[a] < grid.extent(a)) break;
      idx[a] = 0;
    }
  }
  return out;
}

/// Wavenumbers, cached symbols and FFT plans for one grid.
///
/// Immutable after construction and safe to share between threads: the
/// transforms use FFTW's new-array execute interface on caller buffers.
class SpectralWorkspace {
public:
  explicit SpectralWorkspace(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  /// Wavenumbers along one axis in FFT order (0, 1, ..., N/2, -N/2+1, ..., -1).
  const RealArray& wavenumbers(int axis) const { return wavenumbers_[axis]; }
  /// |k_x|^2 summed over the unbounded axes, one entry per sample.
  const RealArray& ksq_x() const { return ksq_x_; }
  /// |k_y|^2 summed over the torus axes.
  const RealArray& ksq_y() const { return ksq_y_; }
  /// |k_y|, the symbol of sqrt(-Delta_y).
  const RealArray& abs_ky() const { return abs_ky_; }
  Real max_ksq() const { return (ksq_x_ + ksq_y_).maxCoeff(); }

  /// Unnormalized forward DFT.
  ComplexArray forward(const ComplexArray& in) const;
  /// Inverse DFT including the 1/N factor.
  ComplexArray inverse(const ComplexArray& in) const;

private:
  struct Plans;
  GridSpec grid_;
  std::vector<RealArray> wavenumbers_;
  RealArray ksq_x_, ksq_y_, abs_ky_;
  std::shared_ptr<const Plans> plans_;
};

/// Trapezoid quadrature of |u|^2.
Real mass(const Field& u);
/// Same quantity from the Fourier coefficients (Parseval).
Real mass_spectral(const SpectralWorkspace& ws, const Field& u);

struct KineticSplit {
  Real kx = 0.0; ///< integral of |grad_x u|^2
  Real ky = 0.0; ///< integral of |grad_y u|^2
};
KineticSplit kinetic_split(const SpectralWorkspace& ws, const Field& u);

/// Multiply the spectrum of `u` by `symbol` and transform back.
Field apply_symbol(const SpectralWorkspace& ws, const Field& u, const RealArray& symbol);
Field neg_laplacian(const SpectralWorkspace& ws, const Field& u, Real mu = 1.0);
Field neg_laplacian_y(const SpectralWorkspace& ws, const Field& u);
Field sqrt_neg_laplacian_y(const SpectralWorkspace& ws, const Field& u);

/// Rescale `u` onto the sphere of squared L2 norm theta^2.
Field normalize(const Field& u, Real theta);

/// Real L2 inner product Re<a, b> with quadrature weights.
Real inner(const Field& a, const Field& b);

/// Mass in the outer tenth of the box along any unbounded axis.
Real boundary_mass(const Field& u);

/// Circular shift by whole cells, one entry per axis.
Field shift_cells(const Field& u, std::span<const int> cells);

} // namespace logwg

#endif // LOGWG_DOMAIN_HPP
