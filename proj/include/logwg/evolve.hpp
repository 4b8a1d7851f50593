#ifndef LOGWG_EVOLVE_HPP
#define LOGWG_EVOLVE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "logwg/energy.hpp"

namespace logwg {

/// i u_t + Delta u + lambda u log(eps + |u|^2) = 0 on the grid.
///
/// Kinetic substeps multiply the spectrum by exp(-i |k|^2 tau); the nonlinear
/// substep multiplies by exp(i lambda dt log(eps + |u|^2)). A stationary state
/// -Delta u0 + w u0 = u0 log u0^2 evolves as u0 exp(+i w t).
struct EvolveConfig {
  Real dt = 1e-3;
  int steps = 1000;
  RegularizationParams reg;
  int lambda_sign = 1;
  int record_every = 100;

  void validate() const;
  Real horizon() const { return dt * steps; }
};

/// dt max|k|^2 <= pi/4, the phase-resolution condition. Coarser steps are
/// still unitary; callers may warn.
bool dt_resolves_phases(const SpectralWorkspace& ws, Real dt);

/// One Strang step: half kinetic, full nonlinear, half kinetic.
Field step(const SpectralWorkspace& ws, const Field& u, const EvolveConfig& config);

/// `count` consecutive Strang steps with adjacent half kinetic substeps fused.
/// Throws DomainError on non-finite samples.
Field propagate(const SpectralWorkspace& ws, const Field& u, const EvolveConfig& config, int count);

/// Energy conserved by the flow at saturation eps:
/// (1/2) int |grad u|^2 - (lambda/2) int G(|u|^2),
/// G(r) = (eps + r) log(eps + r) - r - eps log eps. At eps = 0 and lambda = 1
/// this is the isotropic functional.
Real conserved_energy(const SpectralWorkspace& ws, const Field& u, const RegularizationParams& reg, int lambda_sign);

struct OrbitalDistance {
  Real distance = 0.0; ///< h1 + f1_gap
  Real h1 = 0.0;       ///< min over phase and grid shifts of ||psi - e^{i th} u0(. - tau)||_{H1}
  Real f1_gap = 0.0;   ///< |int F1(|psi|) - int F1(|u0|)|, surrogate for the Orlicz part
  Real phase = 0.0;
  std::vector<int> shift; ///< cells per axis
};

/// Distance from psi to the phase/translation orbit of u0. The shift is the
/// argmax of the H1-weighted cross-correlation; the distance itself is
/// evaluated directly at that shift.
OrbitalDistance orbital_distance(const SpectralWorkspace& ws, const Field& psi, const Field& u0,
                                 const SplitParams& split = {});

struct TrajectorySample {
  Real t = 0.0;
  Real mass = 0.0;
  Real energy = 0.0;
  Real orbital_distance = 0.0;
  Real boundary_mass = 0.0;
};

/// Observer invoked at every recorded step with (step index, field).
using StepObserver = std::function<void(int, const Field&)>;

/// Evolve `u` for config.steps, sampling every record_every steps (and at the
/// end). Orbital distances are measured against `reference`.
std::vector<TrajectorySample> evolve_trajectory(const SpectralWorkspace& ws, const Field& u, const Field& reference,
                                                const EvolveConfig& config, const StepObserver& observer = {});

/// Unit-amplitude Gaussian bump with random centre inside |x| < L/4 and
/// random phase. Reproducible from the seed.
Field random_bump(const GridSpec& grid, std::uint64_t seed);

struct StabilityReport {
  std::vector<TrajectorySample> samples;
  Real initial_distance = 0.0;
  Real max_distance = 0.0;
  Real max_mass_drift = 0.0;   ///< relative
  Real max_energy_drift = 0.0; ///< relative
};

/// Evolve u0 + delta * b / ||b||_{H1}, b = random_bump(seed), and track the
/// distance to the orbit of u0.
StabilityReport stability_experiment(const SpectralWorkspace& ws, const Field& u0, Real delta,
                                     const EvolveConfig& config, std::uint64_t seed = 7);

struct GronwallReport {
  std::vector<Real> times;
  std::vector<Real> distances; ///< ||u2(t) - u1(t)||_2
  std::vector<Real> bounds;    ///< e^{4t} ||w(0)|| (1 + tol_growth)
  Real worst_ratio = 0.0;      ///< max over t > 0 of distance / (e^{4t} ||w(0)||); 0 when w(0) = 0
  bool holds = true;
};

GronwallReport gronwall_check(const SpectralWorkspace& ws, const Field& u1, const Field& u2,
                              const EvolveConfig& config, Real tol_growth = 1e-9);

/// |Im((z2 log|z2|^2 - z1 log|z1|^2) conj(z2 - z1))| with 0 log 0 = 0.
Real log_increment_form(Complex z1, Complex z2);

} // namespace logwg

#endif // LOGWG_EVOLVE_HPP
