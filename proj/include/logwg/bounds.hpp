#ifndef LOGWG_BOUNDS_HPP
#define LOGWG_BOUNDS_HPP

#include <vector>

#include "logwg/domain.hpp"

namespace logwg {

/// Tent profile on [0, 2 pi): zero on [0, a] u [2 pi - a, 2 pi), slope b up
/// to the peak at pi, mirrored after it. The slope b = e^{5/6} / (pi - a) makes
/// int phi^2 log phi^2 equal ||phi||^2.
struct TentParams {
  Real a = 3.141592653589793 - 1.0;
  Real eps_moll = 1e-2;

  Real slope() const;
  void validate() const;
};

struct TentNorms {
  Real norm_sq = 0.0;     ///< int phi^2 dy
  Real entropy_int = 0.0; ///< int phi^2 log phi^2 dy
};

/// Closed forms of the unmollified tent integrals.
TentNorms tent_norms(Real a);

/// Unmollified tent at y (periodic).
Real tent_profile(Real a, Real y);

/// Unit-mass bump kernel exp(-1/(1-t^2)) / Z on |t| < 1.
Real bump_kernel(Real t);

/// phi convolved with the bump kernel of half-width eps_moll.
class MollifiedTent {
public:
  explicit MollifiedTent(const TentParams& params);

  Real operator()(Real y) const;
  /// int_0^{2 pi} phi_eps^2 dy
  Real norm_sq() const;
  /// int_0^{2 pi} phi_eps^2 log phi_eps^2 dy
  Real entropy_int() const;
  const TentParams& params() const { return params_; }

private:
  Real integrate_symmetric(Real (*integrand)(Real)) const;
  TentParams params_;
};

/// phi_eps sampled at y_j = j * 2 pi / points_y.
RealArray mollified_tent(const TentParams& params, int points_y);

/// psi(x, y) = Q(x) (||phi|| / ||phi_eps||)^n prod_j phi_eps(y_j), with Q the
/// Gausson of squared norm theta^2 / ||phi||^{2n}; ||psi||_2 = theta.
Field tensor_testfield(Real theta, const TentParams& params, const GridSpec& grid);

/// Separable evaluation of I_0(psi) = ||phi||^{2n} m~(theta^2/||phi||^{2n}) + I.
struct TentBound {
  Real a = 0.0;
  Real eps_moll = 0.0;
  Real norm_sq = 0.0;       ///< ||phi||^2
  Real norm_sq_moll = 0.0;  ///< ||phi_eps||^2
  Real main_term = 0.0;     ///< ||phi||^{2n} m~ at reduced mass theta^2 / ||phi||^{2n}
  Real correction = 0.0;    ///< I = -(1/2) int Q^2 Phi^2 log Phi^2
  Real correction_limit = 0.0; ///< I at eps_moll = 0, -(n/2) theta^2
  Real i0 = 0.0;            ///< main_term + correction
  Real reference = 0.0;     ///< (2 pi)^n m~ at reduced mass theta^2 / (2 pi)^n
  bool strict = false;      ///< i0 < reference
};
TentBound tent_bound(Real theta, const TentParams& params, int d, int n);

/// One row per a; rows where the inequality fails are kept and flagged.
std::vector<TentBound> upper_bound_I0(Real theta, const std::vector<Real>& a_grid, Real eps_moll, int d, int n);

/// Box Omega = (0, ell)^d with Dirichlet eigenfunction prod sin(pi x_i / ell).
struct EigenBoxParams {
  int d = 1;
  int n = 1;
  Real ell = 1.0;
  Real theta = 1.0; ///< target L2 norm

  Real eigenvalue() const; ///< d pi^2 / ell^2
  void validate() const;
};

struct EigenScanRow {
  Real r = 0.0;
  Real energy = 0.0;       ///< I(phi_r)
  Real lower_printed = 0.0; ///< (2 / theta_eig)^{1/2}
  Real lower_rederived = 0.0; ///< (2 theta_eig)^{1/2}
  Real upper = 0.0;        ///< (theta / (4 |Omega x T^n|^{1/2}))^{2/d}
  bool in_window_printed = false;
  bool in_window_rederived = false;
  bool negative = false;
};

/// int_0^pi sin^2 log sin^2 / int_0^pi sin^2, by quadrature.
Real mean_log_sine_squared();

/// I(phi_r) with phi_r(x, y) = r^{-d/2} phi_1(x / r, y), phi_1 on S_theta.
Real eigen_testfield_energy(const EigenBoxParams& params, Real r);

std::vector<EigenScanRow> eigen_testfield_scan(const EigenBoxParams& params, const std::vector<Real>& r_grid);

} // namespace logwg

#endif // LOGWG_BOUNDS_HPP
