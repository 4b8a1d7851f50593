#ifndef LOGWG_GRADFLOW_HPP
#define LOGWG_GRADFLOW_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logwg/energy.hpp"

namespace logwg {

enum class InitKind { Gausson, GaussonTimesTent, RandomBandlimited, File };

std::string to_string(InitKind kind);
InitKind init_kind_from_string(const std::string& name);

struct FlowConfig {
  Real theta = 1.0; ///< target L2 norm, mass = theta^2
  Real mu = 1.0;
  RegularizationParams reg;
  Real dt0 = 0.1;
  Real dt_min = 1e-6;
  Real dt_max = 1.0;
  Real tol = 1e-8;
  int max_steps = 20000;
  InitKind init = InitKind::RandomBandlimited;
  std::optional<Field> initial; ///< used when init == File
  std::uint64_t seed = 1;
  int restarts = 4;             ///< random starts; lowest energy wins

  void validate() const;
};

struct FlowResult {
  Field field;
  EnergyBreakdown energy;
  Real lambda_rayleigh = 0.0;
  Real lambda_energy = 0.0;
  Real residual = 0.0;
  int steps = 0;
  bool converged = false;
  Real boundary_mass = 0.0;
  /// Energies of the accepted iterates, starting with the initial field.
  std::vector<Real> energy_history;
};

/// Mass-constrained descent on I_mu.
///
/// Each step moves along the preconditioned constrained residual
/// -P (g + lambda u) and projects back onto the mass sphere. P inverts the
/// kinetic symbol in Fourier space and damps the stiff log potential
/// pointwise, so fixed points are exact discrete critical points. Steps that
/// raise the energy beyond roundoff are rejected and dt is halved.
FlowResult minimize(const FlowConfig& config, const GridSpec& grid);

/// Single descent run from a given field (already on any mass sphere).
FlowResult descend(const SpectralWorkspace& ws, const Field& start, const FlowConfig& config);

/// Initial field for a given kind and seed, normalized to theta.
Field initial_field(const GridSpec& grid, const FlowConfig& config, std::uint64_t seed);

/// Localized positive random field with band-limited modulation.
Field random_bandlimited(const GridSpec& grid, std::uint64_t seed);

struct LambdaEstimates {
  Real rayleigh = 0.0; ///< (int |u|^2 log|u|^2 - Kx - mu Ky) / theta^2
  Real energy = 0.0;   ///< 1 - 2 m / theta^2
  Real gap() const;
};

/// Both multiplier estimates in the convention -Delta u + lambda u = u log u^2.
LambdaEstimates lambda_estimates(const SpectralWorkspace& ws, const Field& u, Real mu,
                                 const RegularizationParams& reg, Real m, Real theta);

/// Kx - (d/2) theta^2, zero at minimizers by x-dilation stationarity.
Real pohozaev_residual(const SpectralWorkspace& ws, const Field& u, Real theta);

/// ||g + lambda_R u|| / ||u||.
Real constrained_residual(const SpectralWorkspace& ws, const Field& u, Real mu, const RegularizationParams& reg);

} // namespace logwg

#endif // LOGWG_GRADFLOW_HPP
