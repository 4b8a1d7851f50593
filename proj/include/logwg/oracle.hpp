#ifndef LOGWG_ORACLE_HPP
#define LOGWG_ORACLE_HPP

#include "logwg/domain.hpp"

namespace logwg {

/// Exact Gausson c exp(-|x|^2 / 2) of the stationary problem on R^d.
///
/// The Gausson is taken to be the minimizer of the reduced problem; the
/// gradient flow searches independently and reports lower energies if any.
struct GaussonSpec {
  int d = 1;
  Real reduced_mass = 0.0; ///< squared L2 norm on R^d
  Real lambda = 0.0;
  Real amplitude = 0.0;    ///< c = exp((d + lambda) / 2)

  static GaussonSpec from_mass(Real reduced_mass, int d);
  static GaussonSpec from_lambda(Real lambda, int d);
};

/// lambda = log(M pi^{-d/2}) - d.
Real lambda_of_mass(Real reduced_mass, int d);
/// M = pi^{d/2} e^{d + lambda}.
Real mass_of_lambda(Real lambda, int d);
/// Reduced energy (1/2) M (d + 1 - log(M pi^{-d/2})) = (1 - lambda) M / 2.
Real gausson_energy(Real reduced_mass, int d);

/// y-independent Gausson of waveguide mass theta^2, centred at `shift` along
/// the first x-axis (wrapped periodically). Requires d >= 1 and a box large
/// enough that the amplitude at the edge stays below 1e-12.
Field sample_gausson(const GridSpec& grid, Real theta, Real shift = 0.0);

/// Reduced mass of a y-independent field with waveguide mass theta^2.
Real reduced_mass_of(const GridSpec& grid, Real theta);

/// ||-Delta u + lambda u - u log|u|^2||_2 / ||u||_2 with 0 log 0 = 0.
Real stationary_residual(const SpectralWorkspace& ws, const Field& u, Real lambda);

} // namespace logwg

#endif // LOGWG_ORACLE_HPP
