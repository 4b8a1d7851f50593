#include "logwg/depscan.hpp"

#include <cmath>
#include <numbers>

#include "logwg/oracle.hpp"

namespace logwg {

namespace {

constexpr Real kMonotoneTol = 1e-8;

MuScanRecord make_record(const SpectralWorkspace& ws, const FlowResult& r, Real mu, Real theta, Real ref) {
  MuScanRecord rec;
  rec.mu = mu;
  rec.m = r.energy.total;
  const KineticSplit k = kinetic_split(ws, r.field);
  rec.kx = k.kx;
  rec.ky = k.ky;
  rec.mu_ky = mu * k.ky;
  rec.lambda = r.lambda_rayleigh;
  rec.ydep = k.ky > ydep_threshold(theta);
  rec.reduced_ref = ref;
  rec.gap = rec.m - ref;
  rec.converged = r.converged;
  rec.steps = r.steps;
  rec.w_norm_sq = mass(sqrt_neg_laplacian_y(ws, r.field));
  return rec;
}

} // namespace

void MuScanConfig::validate() const {
  if (!(theta > 0.0)) throw DomainError("mu-scan: theta must be positive");
  if (mus.empty()) throw DomainError("mu-scan: empty mu list");
  for (std::size_t i = 0; i < mus.size(); ++i) {
    if (!(mus[i] > 0.0)) throw DomainError("mu-scan: mu values must be positive");
    if (i > 0 && !(mus[i] > mus[i - 1])) throw DomainError("mu-scan: mu list must be strictly increasing");
  }
  grid.validate();
  if (grid.d < 1 || grid.n < 1) throw DomainError("mu-scan: grid needs d >= 1 and n >= 1");
}

std::vector<Real> log_spaced(Real lo_exp10, Real hi_exp10, int count) {
  if (count < 2) throw DomainError("log_spaced: need at least two points");
  std::vector<Real> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[i] = std::pow(10.0, lo_exp10 + (hi_exp10 - lo_exp10) * i / (count - 1));
  return out;
}

Real ydep_threshold(Real theta) { return 1e-6 * theta * theta; }

Real equality_tolerance(Real reference) { return std::max(1e-8, 1e-6 * std::abs(reference)); }

Real reduced_reference_value(Real theta, int d, int n) {
  const Real torus = std::pow(2.0 * std::numbers::pi, n);
  return torus * gausson_energy(theta * theta / torus, d);
}

ReducedReference reduced_reference(Real theta, const GridSpec& grid, const FlowConfig& flow) {
  ReducedReference out;
  out.closed_form = reduced_reference_value(theta, grid.d, grid.n);
  GridSpec line = grid;
  line.n = 0;
  FlowConfig cfg = flow;
  cfg.theta = std::sqrt(reduced_mass_of(grid, theta));
  cfg.mu = 1.0;
  if (cfg.init == InitKind::File || cfg.init == InitKind::GaussonTimesTent) cfg.init = InitKind::RandomBandlimited;
  cfg.initial.reset();
  const FlowResult r = minimize(cfg, line);
  out.numerical = std::pow(2.0 * std::numbers::pi, grid.n) * r.energy.total;
  out.converged = r.converged;
  out.agree = std::abs(out.numerical - out.closed_form) <= 1e-6 * std::abs(out.closed_form);
  return out;
}

MuScanResult scan(const MuScanConfig& config) {
  config.validate();
  const SpectralWorkspace ws(config.grid);
  MuScanResult result;
  result.reference = reduced_reference(config.theta, config.grid, config.flow);
  const Real ref = result.reference.closed_form;

  FlowConfig base = config.flow;
  base.theta = config.theta;
  const std::size_t count = config.mus.size();
  std::optional<Field> previous;
  for (std::size_t i = 0; i < count; ++i) {
    FlowConfig cfg = base;
    cfg.mu = config.mus[i];
    if (config.warm_start && previous) {
      cfg.init = InitKind::File;
      cfg.initial = previous;
    }
    FlowResult r = minimize(cfg, config.grid);
    MuScanRecord rec = make_record(ws, r, cfg.mu, config.theta, ref);

    const bool sentinel = i == 0 || i == count / 2 || i + 1 == count;
    if (config.cold_check && config.warm_start && sentinel && i > 0) {
      FlowConfig cold = base;
      cold.mu = cfg.mu;
      FlowResult c = minimize(cold, config.grid);
      rec.cold_checked = true;
      if (c.energy.total < r.energy.total - equality_tolerance(ref)) {
        const bool was_checked = rec.cold_checked;
        rec = make_record(ws, c, cfg.mu, config.theta, ref);
        rec.cold_checked = was_checked;
        rec.cold_won = true;
        r = std::move(c);
      }
    } else if (sentinel && i == 0) {
      rec.cold_checked = true; // the first record is a cold start
    }
    previous = r.field;
    result.records.push_back(rec);
  }
  return result;
}

Classification classify(const std::vector<MuScanRecord>& records, Real reference) {
  if (records.size() < 3) throw DomainError("classify: need at least three records");
  Classification c;
  c.tolerance = equality_tolerance(reference);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].m > reference + kMonotoneTol) c.below_reference = false;
    if (i > 0) {
      const Real drop = records[i - 1].m - records[i].m;
      if (drop > kMonotoneTol) c.monotone = false;
      c.worst_monotone_violation = std::max(c.worst_monotone_violation, drop);
    }
  }
  std::size_t begin = records.size();
  while (begin > 0 && std::abs(records[begin - 1].m - reference) < c.tolerance) --begin;
  c.tail_begin = begin;
  if (begin < records.size()) {
    c.kind = DependenceCase::Case2;
    c.mu_star = records[begin].mu;
  }
  return c;
}

} // namespace logwg
