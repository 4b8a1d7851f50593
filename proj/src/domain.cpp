#include "logwg/domain.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace logwg {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

Real index_wavenumber(int i, int count) { return i <= count / 2 ? i : i - count; }

void check_points(int points, const char* name) {
  if (points < 8 || points % 2 != 0)
    throw DomainError(std::string(name) + " must be even and >= 8, got " + std::to_string(points));
}

} // namespace

Real GridSpec::dy() const { return 2.0 * std::numbers::pi / points_y; }

Real GridSpec::cell_volume() const {
  return std::pow(dx(), d) * std::pow(dy(), n);
}

Eigen::Index GridSpec::size() const {
  Eigen::Index s = 1;
  for (int a = 0; a < rank(); ++a) s *= extent(a);
  return s;
}

Real GridSpec::box_volume() const {
  return std::pow(2.0 * half_width, d) * std::pow(2.0 * std::numbers::pi, n);
}

void GridSpec::validate() const {
  if (d < 0 || n < 0) throw DomainError("axis counts must be nonnegative");
  if (d + n < 1) throw DomainError("grid needs at least one axis (d + n >= 1)");
  if (d > 0) {
    check_points(points_x, "points_x");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
      throw DomainError("half_width must be positive and finite");
  }
  if (n > 0) check_points(points_y, "points_y");
}

Real coordinate(const GridSpec& grid, int axis, int i) {
  if (axis < grid.d) return -grid.half_width + i * grid.dx();
  return i * grid.dy();
}

Field::Field(const GridSpec& g) : grid(g), samples(ComplexArray::Zero(g.size())) {}

Field::Field(const GridSpec& g, ComplexArray s) : grid(g), samples(std::move(s)) {
  if (samples.size() != grid.size())
    throw DomainError("sample count " + std::to_string(samples.size()) + " does not match grid size " +
                      std::to_string(grid.size()));
}

bool Field::all_finite() const { return samples.isFinite().all(); }

struct SpectralWorkspace::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

SpectralWorkspace::SpectralWorkspace(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  const int rank = grid_.rank();
  wavenumbers_.resize(static_cast<std::size_t>(rank));
  for (int a = 0; a < rank; ++a) {
    const int count = grid_.extent(a);
    // x-axes have period 2L, torus axes period 2 pi.
    const Real scale = a < grid_.d ? std::numbers::pi / grid_.half_width : 1.0;
    RealArray k(count);
    for (int i = 0; i < count; ++i) k[i] = scale * index_wavenumber(i, count);
    wavenumbers_[a] = std::move(k);
  }

  const Eigen::Index total = grid_.size();
  ksq_x_ = RealArray::Zero(total);
  ksq_y_ = RealArray::Zero(total);
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    Real sx = 0.0, sy = 0.0;
    for (int a = 0; a < rank; ++a) {
      const Real k = wavenumbers_[a][idx[a]];
      (a < grid_.d ? sx : sy) += k * k;
    }
    ksq_x_[flat] = sx;
    ksq_y_[flat] = sy;
    for (int a = rank - 1; a >= 0; --a) {
      if (++idx[a] < grid_.extent(a)) break;
      idx[a] = 0;
    }
  }
  abs_ky_ = ksq_y_.sqrt();

  std::vector<int> dims(static_cast<std::size_t>(rank));
  for (int a = 0; a < rank; ++a) dims[a] = grid_.extent(a);
  auto plans = std::make_shared<Plans>();
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    ComplexArray scratch_in(total), scratch_out(total);
    auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
    auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans->forward = fftw_plan_dft(rank, dims.data(), in, out, FFTW_FORWARD, flags);
    plans->backward = fftw_plan_dft(rank, dims.data(), in, out, FFTW_BACKWARD, flags);
  }
  if (!plans->forward || !plans->backward) throw DomainError("FFTW planning failed");
  plans_ = std::move(plans);
}

ComplexArray SpectralWorkspace::forward(const ComplexArray& in) const {
  ComplexArray src = in; // FFTW may not preserve the input
  ComplexArray out(in.size());
  fftw_execute_dft(plans_->forward, reinterpret_cast<fftw_complex*>(src.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

ComplexArray SpectralWorkspace::inverse(const ComplexArray& in) const {
  ComplexArray src = in;
  ComplexArray out(in.size());
  fftw_execute_dft(plans_->backward, reinterpret_cast<fftw_complex*>(src.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  out /= static_cast<Real>(in.size());
  return out;
}

Real mass(const Field& u) { return u.samples.abs2().sum() * u.grid.cell_volume(); }

Real mass_spectral(const SpectralWorkspace& ws, const Field& u) {
  const ComplexArray hat = ws.forward(u.samples);
  return hat.abs2().sum() * u.grid.cell_volume() / static_cast<Real>(u.samples.size());
}

KineticSplit kinetic_split(const SpectralWorkspace& ws, const Field& u) {
  const ComplexArray hat = ws.forward(u.samples);
  const RealArray power = hat.abs2();
  const Real w = u.grid.cell_volume() / static_cast<Real>(u.samples.size());
  return {(ws.ksq_x() * power).sum() * w, (ws.ksq_y() * power).sum() * w};
}

Field apply_symbol(const SpectralWorkspace& ws, const Field& u, const RealArray& symbol) {
  ComplexArray hat = ws.forward(u.samples);
  hat *= symbol.cast<Complex>();
  return Field(u.grid, ws.inverse(hat));
}

Field neg_laplacian(const SpectralWorkspace& ws, const Field& u, Real mu) {
  return apply_symbol(ws, u, ws.ksq_x() + mu * ws.ksq_y());
}

Field neg_laplacian_y(const SpectralWorkspace& ws, const Field& u) {
  return apply_symbol(ws, u, ws.ksq_y());
}

Field sqrt_neg_laplacian_y(const SpectralWorkspace& ws, const Field& u) {
  return apply_symbol(ws, u, ws.abs_ky());
}

Field normalize(const Field& u, Real theta) {
  if (!(theta > 0.0)) throw DomainError("normalize: theta must be positive");
  const Real m = mass(u);
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("normalize: field has zero or non-finite mass");
  return Field(u.grid, u.samples * (theta / std::sqrt(m)));
}

Real inner(const Field& a, const Field& b) {
  return (a.samples.conjugate() * b.samples).real().sum() * a.grid.cell_volume();
}

Real boundary_mass(const Field& u) {
  const GridSpec& g = u.grid;
  if (g.d == 0) return 0.0;
  const Real cut = 0.9 * g.half_width;
  const int rank = g.rank();
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  Real acc = 0.0;
  for (Eigen::Index flat = 0; flat < u.samples.size(); ++flat) {
    bool outer = false;
    for (int a = 0; a < g.d && !outer; ++a) outer = std::abs(coordinate(g, a, idx[a])) >= cut;
    if (outer) acc += std::norm(u.samples[flat]);
    for (int a = rank - 1; a >= 0; --a) {
      if (++idx[a] < g.extent(a)) break;
      idx[a] = 0;
    }
  }
  return acc * g.cell_volume();
}

Field shift_cells(const Field& u, std::span<const int> cells) {
  const GridSpec& g = u.grid;
  const int rank = g.rank();
  if (static_cast<int>(cells.size()) != rank) throw DomainError("shift_cells: one shift per axis required");
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(rank), 1);
  for (int a = rank - 2; a >= 0; --a) stride[a] = stride[a + 1] * g.extent(a + 1);
  Field out(g);
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  for (Eigen::Index flat = 0; flat < u.samples.size(); ++flat) {
    Eigen::Index target = 0;
    for (int a = 0; a < rank; ++a) {
      const int e = g.extent(a);
      target += static_cast<Eigen::Index>(((idx[a] + cells[a]) % e + e) % e) * stride[a];
    }
    out.samples[target] = u.samples[flat];
    for (int a = rank - 1; a >= 0; --a) {
      if (++idx[a] < g.extent(a)) break;
      idx[a] = 0;
    }
  }
  return out;
}

} // namespace logwg
