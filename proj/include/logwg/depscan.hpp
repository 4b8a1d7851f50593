#ifndef LOGWG_DEPSCAN_HPP
#define LOGWG_DEPSCAN_HPP

#include <optional>
#include <vector>

#include "logwg/gradflow.hpp"

namespace logwg {

struct MuScanConfig {
  Real theta = 1.0;
  std::vector<Real> mus;  ///< strictly increasing, positive
  GridSpec grid;
  FlowConfig flow;        ///< theta and mu are overwritten per record
  bool warm_start = true;
  bool cold_check = true; ///< cold restarts at the first, middle and last mu

  void validate() const;
};

/// `count` log-spaced values from 10^lo to 10^hi.
std::vector<Real> log_spaced(Real lo_exp10, Real hi_exp10, int count);

struct MuScanRecord {
  Real mu = 0.0;
  Real m = 0.0;
  Real kx = 0.0;
  Real ky = 0.0;
  Real mu_ky = 0.0;
  Real lambda = 0.0;
  bool ydep = false;
  Real reduced_ref = 0.0;
  Real gap = 0.0; ///< m - reduced_ref
  bool converged = false;
  int steps = 0;
  bool cold_checked = false;
  bool cold_won = false; ///< the cold restart found a lower energy than the warm branch
  Real w_norm_sq = 0.0;  ///< ||sqrt(-Delta_y) u||^2, equal to Ky by Parseval
};

/// y-dependence threshold on Ky: 1e-6 theta^2.
Real ydep_threshold(Real theta);

struct ReducedReference {
  Real closed_form = 0.0; ///< (2 pi)^n m~ at reduced mass theta^2 / (2 pi)^n
  Real numerical = 0.0;   ///< same quantity from a gradient flow on R^d
  bool converged = false;
  bool agree = false;     ///< relative difference below 1e-6
};

/// Reference value attained by y-independent fields. The numerical route
/// solves the reduced problem on the x-axes of `grid` with `flow`'s settings.
ReducedReference reduced_reference(Real theta, const GridSpec& grid, const FlowConfig& flow);
/// Closed form only.
Real reduced_reference_value(Real theta, int d, int n);

struct MuScanResult {
  std::vector<MuScanRecord> records;
  ReducedReference reference;
};

MuScanResult scan(const MuScanConfig& config);

enum class DependenceCase { Case1, Case2 };

struct Classification {
  DependenceCase kind = DependenceCase::Case1;
  std::optional<Real> mu_star;     ///< first mu of the terminal equality segment
  std::size_t tail_begin = 0;      ///< index of that record (records.size() for Case1)
  bool monotone = true;            ///< m non-decreasing within 1e-8
  Real worst_monotone_violation = 0.0;
  bool below_reference = true;     ///< m <= reference + 1e-8 everywhere
  Real tolerance = 0.0;            ///< equality tolerance on |gap|
};

/// |gap| < max(1e-8, 1e-6 |reference|) counts as equality.
Real equality_tolerance(Real reference);

Classification classify(const std::vector<MuScanRecord>& records, Real reference);

} // namespace logwg

#endif // LOGWG_DEPSCAN_HPP
