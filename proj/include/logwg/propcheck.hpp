#ifndef LOGWG_PROPCHECK_HPP
#define LOGWG_PROPCHECK_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "logwg/gradflow.hpp"

namespace logwg {

enum class EnsembleKind { BandLimited, GaussonMixture, TentTensor };

std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_kind_from_string(const std::string& name);

/// Reproducible family of localized test fields; member i depends only on
/// (seed, kind, grid, i).
struct SampleEnsemble {
  std::uint64_t seed = 1;
  int count = 20;
  EnsembleKind kind = EnsembleKind::BandLimited;
  GridSpec grid;

  void validate() const;
  Field generate(int index) const;
};

/// |int (|u_n|^2 log|u_n|^2 - |v_s|^2 log|v_s|^2) - int |u|^2 log|u|^2| with
/// v_s = v shifted by `shift` cells along the first x-axis and u_n = u + v_s.
Real brezis_lieb_residual(const Field& u, const Field& v, int shift);

struct SubadditivityReport {
  Real theta1 = 0.0;
  Real theta2 = 0.0;
  Real m1 = 0.0;
  Real m2 = 0.0;
  Real margin = 0.0; ///< m1 - (theta1^2 / theta2^2) m2
  bool converged = false;
  bool positive = false; ///< margin > -1e-8
};

/// Solver handle: minimal energy on the mass sphere of radius theta.
using MassSolver = std::function<FlowResult(Real theta)>;

SubadditivityReport subadditivity_check(Real theta1, Real theta2, const MassSolver& solver);

/// (1/2) M1 log(M2 / M1), the margin of the reduced problem in closed form.
Real reduced_margin_closed_form(Real mass1, Real mass2);
/// The same margin from reduced oracle energies, m~(M1) - (M1/M2) m~(M2).
Real reduced_margin_oracle(Real mass1, Real mass2, int d);

/// max over xi of |I(xi u) - xi^2 I(u) + xi^2 log(xi) mass(u)|, exact logarithm.
Real scaling_identity_check(const SpectralWorkspace& ws, const Field& u, const std::vector<Real>& xis, Real mu = 1.0);

/// Largest |F2(s) - F1(s) - s^2 log(s^2) / 2| / (1 + s^2 (1 + |log s^2|)) over
/// `count` random s, half uniform on [0, 1] and half log-uniform on [1e-8, 1e3].
Real split_identity_max_error(std::uint64_t seed, long count, const SplitParams& split = {});

/// Worst |Im((z2 log|z2|^2 - z1 log|z1|^2) conj(z2 - z1))| / |z2 - z1|^2 over
/// random pairs; the pair z1 = z2 contributes 0. Pairs mix unit-disc samples and
/// log-uniform moduli in [1e-6, 1e3].
Real log_increment_worst_ratio(std::uint64_t seed, long count);

struct GnSweep {
  Real max_ratio = 0.0;
  std::vector<Real> ratios;
};

/// GN quotient of every ensemble member.
GnSweep gn_sweep(const SampleEnsemble& ensemble, Real alpha);

} // namespace logwg

#endif // LOGWG_PROPCHECK_HPP
