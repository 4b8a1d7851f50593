#include "logwg/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "logwg/bounds.hpp"
#include "logwg/depscan.hpp"
#include "logwg/io.hpp"
#include "logwg/oracle.hpp"

namespace logwg {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr Real kPi = std::numbers::pi;

// ---------------------------------------------------------------- parsing

Real parse_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  Real v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + text + "'");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

class Reader {
public:
  explicit Reader(const std::map<std::string, std::string>& v) : v_(v) {}
  const std::string& str(const std::string& k) const { return v_.at(k); }
  Real real(const std::string& k) const { return parse_real(k, str(k)); }
  int integer(const std::string& k) const {
    const long long x = parse_int(k, str(k));
    require(x >= -2147483647LL && x <= 2147483647LL, "key '" + k + "': out of range");
    return static_cast<int>(x);
  }
  long long wide(const std::string& k) const { return parse_int(k, str(k)); }
  bool flag(const std::string& k) const { return parse_bool(k, str(k)); }
  bool set(const std::string& k) const { return !str(k).empty(); }

private:
  const std::map<std::string, std::string>& v_;
};

// ---------------------------------------------------------------- run plumbing

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Outcome {
  json summary = json::object();
  int status = kExitOk;
  std::string state = "ok";
};

struct RunContext {
  const RunConfig& config;
  std::ostream& out;
  std::ostream& err;
  fs::path dir;

  fs::path file(const std::string& name) const { return dir / name; }
};

CsvRow gs_row(const SpectralWorkspace& ws, const FlowResult& r, Real mu, Real theta, Real ref) {
  const KineticSplit k = kinetic_split(ws, r.field);
  return {mu,
          theta * theta,
          r.energy.total,
          k.kx,
          k.ky,
          mu * k.ky,
          r.lambda_rayleigh,
          r.lambda_energy,
          r.residual,
          static_cast<long long>(r.steps),
          r.converged,
          r.boundary_mass,
          pohozaev_residual(ws, r.field, theta),
          ref};
}

void write_history(const fs::path& path, const std::vector<Real>& history) {
  std::vector<CsvRow> rows;
  rows.reserve(history.size());
  for (std::size_t i = 0; i < history.size(); ++i) rows.push_back({static_cast<long long>(i), history[i]});
  emit_csv(path, schema::energy_history, rows);
}

FlowConfig flow_with_initial(const RunConfig& c) {
  FlowConfig f = c.flow;
  if (f.init == InitKind::File) f.initial = read_field_snapshot(c.init_file, c.grid);
  return f;
}

// ---------------------------------------------------------------- commands

Outcome cmd_groundstate(const RunContext& ctx) {
  const RunConfig& c = ctx.config;
  const FlowConfig flow = flow_with_initial(c);
  const SpectralWorkspace ws(c.grid);
  const FlowResult r = minimize(flow, c.grid);
  const Real ref = reduced_reference_value(c.theta, c.grid.d, c.grid.n);
  emit_csv(ctx.file("groundstate.csv"), schema::groundstate, {gs_row(ws, r, flow.mu, c.theta, ref)});
  write_history(ctx.file("energy_history.csv"), r.energy_history);
  write_field_snapshot(r.field, ctx.file("ground_state.field"));

  Outcome o;
  const KineticSplit k = kinetic_split(ws, r.field);
  o.summary = {{"converged", r.converged},     {"m", r.energy.total},   {"reduced_ref", ref},
               {"gap", r.energy.total - ref},  {"Kx", k.kx},            {"Ky", k.ky},
               {"lambda_rayleigh", r.lambda_rayleigh}, {"lambda_energy", r.lambda_energy},
               {"residual", r.residual},       {"steps", r.steps},      {"pohozaev", pohozaev_residual(ws, r.field, c.theta)}};
  ctx.out << "groundstate: m = " << format_real(r.energy.total) << ", reduced reference = " << format_real(ref)
          << ", Ky = " << format_real(k.ky) << (r.converged ? ", converged" : ", NOT converged") << "\n";
  if (!r.converged) {
    o.status = kExitNumerical;
    o.state = "nonconverged";
  }
  return o;
}

Outcome cmd_mu_scan(const RunContext& ctx) {
  const RunConfig& c = ctx.config;
  MuScanConfig sc;
  sc.theta = c.theta;
  sc.grid = c.grid;
  sc.flow = flow_with_initial(c);
  sc.mus = log_spaced(c.mu_min_exp, c.mu_max_exp, c.mu_count);
  sc.warm_start = c.warm_start;
  sc.cold_check = c.cold_check;
  const MuScanResult res = scan(sc);
  std::vector<CsvRow> rows;
  bool all_converged = true;
  for (const MuScanRecord& r : res.records) {
    rows.push_back({r.mu, r.m, r.kx, r.ky, r.mu_ky, r.lambda, r.gap, r.ydep, r.converged});
    all_converged = all_converged && r.converged;
  }
  emit_csv(ctx.file("mu_scan.csv"), schema::mu_scan, rows);
  std::vector<CsvRow> detail;
  for (const MuScanRecord& r : res.records)
    detail.push_back({r.mu, static_cast<long long>(r.steps), r.cold_checked, r.cold_won, r.w_norm_sq, r.reduced_ref});
  emit_csv(ctx.file("mu_scan_detail.csv"), {"mu", "steps", "cold_checked", "cold_won", "w_norm_sq", "reduced_ref"},
           detail);

  const Classification cl = classify(res.records, res.reference.closed_form);
  Outcome o;
  o.summary = {{"case", cl.kind == DependenceCase::Case2 ? "case2" : "case1"},
               {"mu_star", cl.mu_star ? json(*cl.mu_star) : json(nullptr)},
               {"monotone", cl.monotone},
               {"worst_monotone_violation", cl.worst_monotone_violation},
               {"below_reference", cl.below_reference},
               {"equality_tolerance", cl.tolerance},
               {"reduced_ref_closed_form", res.reference.closed_form},
               {"reduced_ref_numerical", res.reference.numerical},
               {"reduced_ref_agree", res.reference.agree},
               {"ky_last", res.records.back().ky},
               {"mu_ky_last", res.records.back().mu_ky},
               {"all_converged", all_converged}};
  ctx.out << "mu-scan: " << res.records.size() << " records, "
          << (cl.kind == DependenceCase::Case2 ? "case 2, mu* = " + format_real(*cl.mu_star) : std::string("case 1"))
          << (cl.monotone ? ", monotone" : ", NOT monotone") << "\n";
  if (!all_converged || !res.reference.agree) {
    o.status = kExitNumerical;
    o.state = "nonconverged";
  }
  return o;
}

Outcome cmd_evolve(const RunContext& ctx) {
  const RunConfig& c = ctx.config;
  const SpectralWorkspace ws(c.grid);
  Field u0;
  json init = json::object();
  if (c.evolve_init == "gausson") {
    u0 = sample_gausson(c.grid, c.theta);
  } else if (c.evolve_init == "file") {
    u0 = read_field_snapshot(c.init_file, c.grid);
  } else {
    FlowConfig flow = flow_with_initial(c);
    flow.mu = 1.0; // the evolution is isotropic
    const FlowResult gs = minimize(flow, c.grid);
    if (!gs.converged) throw std::runtime_error("evolve: ground state flow did not converge");
    u0 = gs.field;
    init = {{"m", gs.energy.total}, {"residual", gs.residual}, {"steps", gs.steps}};
    write_field_snapshot(u0, ctx.file("ground_state.field"));
  }
  if (!dt_resolves_phases(ws, c.evolve.dt))
    ctx.err << "warning: dt * max|k|^2 = " << format_real(c.evolve.dt * ws.max_ksq())
            << " exceeds pi/4; the highest modes are under-resolved in time\n";

  const Field bump = random_bump(c.grid, c.pert_seed);
  const KineticSplit kb = kinetic_split(ws, bump);
  const Real scale = c.pert / std::sqrt(mass(bump) + kb.kx + kb.ky);
  const Field start(c.grid, u0.samples + scale * bump.samples);

  StepObserver observer;
  if (c.snapshot_every > 0) {
    observer = [&](int step, const Field& f) {
      if (step % c.snapshot_every == 0 || step == c.evolve.steps)
        write_field_snapshot(f, ctx.file("snapshot_" + std::to_string(step) + ".field"));
    };
  }
  const std::vector<TrajectorySample> traj = evolve_trajectory(ws, start, u0, c.evolve, observer);
  std::vector<CsvRow> rows;
  Real max_d = 0.0, mass_drift = 0.0, energy_drift = 0.0;
  for (const TrajectorySample& s : traj) {
    rows.push_back({s.t, s.mass, s.energy, s.orbital_distance, s.boundary_mass});
    max_d = std::max(max_d, s.orbital_distance);
    mass_drift = std::max(mass_drift, std::abs(s.mass - traj.front().mass) / traj.front().mass);
    energy_drift = std::max(energy_drift, std::abs(s.energy - traj.front().energy) /
                                              std::max(1.0, std::abs(traj.front().energy)));
  }
  emit_csv(ctx.file("trajectory.csv"), schema::trajectory, rows);
  Outcome o;
  o.summary = {{"initial", c.evolve_init},
               {"ground_state", init},
               {"initial_orbdist", traj.front().orbital_distance},
               {"max_orbdist", max_d},
               {"max_mass_drift", mass_drift},
               {"max_energy_drift", energy_drift},
               {"horizon", c.evolve.horizon()},
               {"orbdist_note", "H1 distance to the phase/translation orbit plus |int F1| surrogate"}};
  ctx.out << "evolve: t = " << format_real(c.evolve.horizon()) << ", max orbital distance "
          << format_real(max_d) << ", mass drift " << format_real(mass_drift) << "\n";
  return o;
}

Outcome cmd_bounds(const RunContext& ctx) {
  const RunConfig& c = ctx.config;
  std::vector<Real> as;
  for (int i = 1; i <= c.a_count; ++i) as.push_back(kPi * i / (c.a_count + 1));
  const std::vector<TentBound> tb = upper_bound_I0(c.theta, as, c.eps_moll, c.grid.d, std::max(1, c.grid.n));
  std::vector<CsvRow> rows;
  long long strict = 0;
  for (const TentBound& b : tb) {
    rows.push_back({b.a, b.eps_moll, b.norm_sq, b.norm_sq_moll, b.main_term, b.correction, b.correction_limit, b.i0,
                    b.reference, b.strict});
    strict += b.strict ? 1 : 0;
  }
  emit_csv(ctx.file("tent_bounds.csv"), schema::tent_bounds, rows);

  EigenBoxParams box{c.grid.d, c.grid.n, c.ell, c.theta};
  std::vector<Real> rs;
  for (int i = 0; i < c.r_count; ++i)
    rs.push_back(c.r_min * std::pow(c.r_max / c.r_min, c.r_count > 1 ? Real(i) / (c.r_count - 1) : 0.0));
  const std::vector<EigenScanRow> es = eigen_testfield_scan(box, rs);
  std::vector<CsvRow> erows;
  long long neg_printed = 0, neg_rederived = 0, in_printed = 0, in_rederived = 0;
  for (const EigenScanRow& r : es) {
    erows.push_back({r.r, r.energy, r.lower_printed, r.lower_rederived, r.upper, r.in_window_printed,
                     r.in_window_rederived, r.negative});
    in_printed += r.in_window_printed;
    in_rederived += r.in_window_rederived;
    neg_printed += r.in_window_printed && r.negative;
    neg_rederived += r.in_window_rederived && r.negative;
  }
  emit_csv(ctx.file("eigen_scan.csv"), schema::eigen_scan, erows);
  Outcome o;
  o.summary = {{"tent_rows", tb.size()},
               {"tent_strict_rows", strict},
               {"eigen_rows", es.size()},
               {"window_printed_rows", in_printed},
               {"window_printed_negative", neg_printed},
               {"window_rederived_rows", in_rederived},
               {"window_rederived_negative", neg_rederived}};
  ctx.out << "bounds: " << strict << "/" << tb.size() << " tent rows strictly below the reference\n";
  return o;
}

Outcome cmd_oracle(const RunContext& ctx) {
  const RunConfig& c = ctx.config;
  const SpectralWorkspace ws(c.grid);
  const Real reduced = reduced_mass_of(c.grid, c.theta);
  const GaussonSpec g = GaussonSpec::from_mass(reduced, c.grid.d);
  const Real ref = reduced_reference_value(c.theta, c.grid.d, c.grid.n);
  const Field u = sample_gausson(c.grid, c.theta);
  const Real sampled = energy(ws, u, 1.0).total;
  const Real residual = stationary_residual(ws, u, g.lambda);
  emit_csv(ctx.file("oracle.csv"), schema::oracle,
           {{static_cast<long long>(c.grid.d), static_cast<long long>(c.grid.n), c.theta * c.theta, reduced, g.lambda,
             g.amplitude, gausson_energy(reduced, c.grid.d), ref, sampled, residual}});
  Outcome o;
  o.summary = {{"lambda", g.lambda},  {"amplitude", g.amplitude}, {"reference", ref},
               {"sampled_energy", sampled}, {"pde_residual", residual}};
  ctx.out << "oracle: lambda = " << format_real(g.lambda) << ", reference energy = " << format_real(ref)
          << ", sampled residual = " << format_real(residual) << "\n";
  return o;
}

// ---------------------------------------------------------------- verify suites

struct SuiteResult {
  bool pass = true;
  json summary = json::object();
};

SuiteResult suite_scaling(const RunContext& ctx) {
  const RunConfig& c = ctx.config;
  const SampleEnsemble ens{c.seed, c.samples, c.ensemble, c.grid};
  const SpectralWorkspace ws(c.grid);
  const std::vector<Real> xis{0.5, 1.0, std::numbers::e, 3.0};
  std::vector<CsvRow> rows;
  SuiteResult s;
  Real worst = 0.0;
  for (int i = 0; i < ens.count; ++i) {
    const Field u = ens.generate(i);
    const Real base = energy(ws, u, 1.0).total;
    const Real dev = scaling_identity_check(ws, u, xis);
    const Real tol = 1e-10 * (1.0 + std::abs(base));
    rows.push_back({static_cast<long long>(i), base, dev, tol, dev <= tol});
    s.pass = s.pass && dev <= tol;
    worst = std::max(worst, dev / tol);
  }
  emit_csv(ctx.file("verify_scaling.csv"), {"index", "energy", "deviation", "tolerance", "pass"}, rows);
  s.summary = {{"fields", ens.count}, {"worst_deviation_over_tolerance", worst}};
  return s;
}

SuiteResult suite_split(const RunContext& ctx) {
  const RunConfig& c = ctx.config;
  const Real err = split_identity_max_error(c.seed, c.split_samples, SplitParams{});
  SuiteResult s;
  s.pass = err <= 1e-10;
  emit_csv(ctx.file("verify_split.csv"), {"samples", "max_error", "tolerance", "pass"},
           {{static_cast<long long>(c.split_samples), err, 1e-10, s.pass}});
  s.summary = {{"samples", c.split_samples}, {"max_error", err}};
  return s;
}

SuiteResult suite_gn(const RunContext& ctx) {
  const RunConfig& c = ctx.config;
  const SampleEnsemble ens{c.seed, c.samples, c.ensemble, c.grid};
  const GnSweep sweep = gn_sweep(ens, c.alpha);
  std::vector<CsvRow> rows;
  SuiteResult s;
  for (std::size_t i = 0; i < sweep.ratios.size(); ++i) {
    rows.push_back({static_cast<long long>(i), sweep.ratios[i]});
    s.pass = s.pass && std::isfinite(sweep.ratios[i]) && sweep.ratios[i] > 0.0;
  }
  emit_csv(ctx.file("verify_gn.csv"), {"index", "ratio"}, rows);
  s.summary = {{"alpha", c.alpha}, {"max_ratio", sweep.max_ratio}, {"fields", ens.count}};
  return s;
}

SuiteResult suite_brezis_lieb(const RunContext& ctx) {
  const RunConfig& c = ctx.config;
  const Field u = sample_gausson(c.grid, 1.0);
  SuiteResult s;
  std::vector<CsvRow> rows;
  const Real zero = brezis_lieb_residual(u, Field(c.grid), 0);
  rows.push_back({0.0, 0LL, zero});
  s.pass = zero == 0.0;
  Real previous = std::numeric_limits<Real>::infinity();
  for (Real frac : {0.25, 0.5, 0.75}) {
    const int cells = static_cast<int>(std::lround(frac * c.grid.half_width / c.grid.dx()));
    const Real r = brezis_lieb_residual(u, u, cells);
    rows.push_back({frac * c.grid.half_width, static_cast<long long>(cells), r});
    s.pass = s.pass && r < previous;
    previous = r;
  }
  emit_csv(ctx.file("verify_brezis_lieb.csv"), {"shift", "cells", "residual"}, rows);
  s.summary = {{"zero_field_residual", zero}, {"last_residual", previous}};
  return s;
}

SuiteResult suite_subadditivity(const RunContext& ctx) {
  const RunConfig& c = ctx.config;
  const MassSolver solver = [&](Real theta) {
    FlowConfig f = c.flow;
    f.theta = theta;
    if (f.init == InitKind::File) f.init = InitKind::RandomBandlimited;
    f.initial.reset();
    return minimize(f, c.grid);
  };
  const Real t2 = c.theta * c.theta;
  SuiteResult s;
  std::vector<CsvRow> rows;
  const int d = c.grid.d;
  const Real torus = std::pow(2.0 * kPi, c.grid.n);
  for (const auto& [m1, m2] : {std::pair{0.5 * t2, t2}, std::pair{t2, 1.5 * t2}}) {
    const SubadditivityReport r = subadditivity_check(std::sqrt(m1), std::sqrt(m2), solver);
    const Real closed = torus * reduced_margin_closed_form(m1 / torus, m2 / torus);
    const Real via_oracle = torus * reduced_margin_oracle(m1 / torus, m2 / torus, d);
    const bool oracle_ok = std::abs(closed - via_oracle) <= 1e-12 * std::max(1.0, std::abs(closed));
    rows.push_back({m1, m2, r.m1, r.m2, r.margin, closed, via_oracle, r.converged, r.positive});
    s.pass = s.pass && r.converged && r.positive && oracle_ok;
  }
  emit_csv(ctx.file("verify_subadditivity.csv"),
           {"mass1", "mass2", "m1", "m2", "margin", "reduced_closed_form", "reduced_oracle", "converged", "positive"},
           rows);
  s.summary = {{"pairs", rows.size()}};
  return s;
}

SuiteResult suite_gronwall(const RunContext& ctx) {
  const RunConfig& c = ctx.config;
  SuiteResult s;
  const Real ratio = log_increment_worst_ratio(c.seed, c.split_samples);
  const SpectralWorkspace ws(c.grid);
  const Field u1 = sample_gausson(c.grid, c.theta);
  const Field bump = random_bump(c.grid, c.pert_seed);
  const Field u2(c.grid, u1.samples + 1e-6 * bump.samples);
  EvolveConfig ec = c.evolve;
  ec.steps = static_cast<int>(std::lround(2.0 / ec.dt));
  ec.record_every = std::max(1, ec.steps / 20);
  const GronwallReport g = gronwall_check(ws, u1, u2, ec);
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < g.times.size(); ++i) rows.push_back({g.times[i], g.distances[i], g.bounds[i]});
  emit_csv(ctx.file("verify_gronwall.csv"), {"t", "w_norm", "bound"}, rows);
  s.pass = ratio <= 4.0 && g.holds;
  s.summary = {{"pointwise_pairs", c.split_samples}, {"pointwise_worst_ratio", ratio}, {"bound_holds", g.holds},
               {"worst_growth_ratio", g.worst_ratio}};
  return s;
}

Outcome cmd_verify(const RunContext& ctx) {
  const std::vector<std::pair<std::string, SuiteResult (*)(const RunContext&)>> suites{
      {"scaling", suite_scaling}, {"split", suite_split},       {"gn", suite_gn},
      {"brezis-lieb", suite_brezis_lieb}, {"subadditivity", suite_subadditivity}, {"gronwall", suite_gronwall}};
  Outcome o;
  bool all = true;
  for (const auto& [name, fn] : suites) {
    if (ctx.config.suite != "all" && ctx.config.suite != name) continue;
    SuiteResult r = fn(ctx);
    r.summary["pass"] = r.pass;
    o.summary[name] = r.summary;
    ctx.out << "verify " << name << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
    all = all && r.pass;
  }
  if (!all) {
    o.status = kExitProperty;
    o.state = "property-failure";
  }
  return o;
}

Outcome dispatch(const std::string& command, const RunContext& ctx) {
  if (command == "groundstate") return cmd_groundstate(ctx);
  if (command == "mu-scan") return cmd_mu_scan(ctx);
  if (command == "evolve") return cmd_evolve(ctx);
  if (command == "bounds") return cmd_bounds(ctx);
  if (command == "verify") return cmd_verify(ctx);
  return cmd_oracle(ctx);
}

/// Checks that need the filesystem but must fail before any output exists.
void preflight(const std::string& command, const RunConfig& c) {
  const bool needs_file = (c.flow.init == InitKind::File && command != "bounds" && command != "oracle") ||
                          (command == "evolve" && c.evolve_init == "file");
  if (needs_file) {
    require(!c.init_file.empty(), "init_file must be set when reading the initial field from a file");
    (void)read_field_snapshot(c.init_file, c.grid);
  }
  if (command == "oracle" || command == "evolve" || (command == "verify" && (c.suite == "all" || c.suite == "gronwall")))
    (void)sample_gausson(c.grid, c.theta); // box large enough
  if (command == "mu-scan") require(c.grid.n >= 1, "mu-scan needs n >= 1");
}

} // namespace

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys{
      {"d", "1"},           {"n", "1"},           {"L", "12"},          {"points_x", "256"},
      {"points_y", "32"},   {"theta", ""},        {"mass", ""},         {"lambda_target", ""},
      {"mu", "1"},          {"eps_sat", "0"},     {"dt0", "0.1"},       {"dt_min", "1e-6"},
      {"dt_max", "1"},      {"tol", "1e-8"},      {"max_steps", "20000"}, {"init", "random"},
      {"init_file", ""},    {"restarts", "4"},    {"seed", "1"},        {"out", "logwg_out"},
      {"mu_min_exp", "-2"}, {"mu_max_exp", "3"},  {"mu_count", "13"},   {"warm_start", "true"},
      {"cold_check", "true"}, {"dt", "0.005"},    {"steps", "2000"},    {"lambda_sign", "1"},
      {"record_every", "100"}, {"evolve_init", "groundstate"}, {"pert", "1e-3"}, {"pert_seed", "7"},
      {"snapshot_every", "0"}, {"a_count", "20"}, {"eps_moll", "1e-2"}, {"ell", "1"},
      {"r_min", "0.05"},    {"r_max", "5"},       {"r_count", "50"},    {"suite", "all"},
      {"samples", "20"},    {"alpha", "1"},       {"split_samples", "1000000"}, {"ensemble", "bandlimited"}};
  return keys;
}

Real resolve_theta(const std::map<std::string, std::string>& values, int d, int n) {
  const Reader r(values);
  const int given = r.set("theta") + r.set("mass") + r.set("lambda_target");
  require(given <= 1, "set at most one of theta, mass, lambda_target");
  if (r.set("theta")) {
    const Real t = r.real("theta");
    require(t > 0.0, "theta must be positive");
    return t;
  }
  if (r.set("mass")) {
    const Real m = r.real("mass");
    require(m > 0.0, "mass must be positive");
    return std::sqrt(m);
  }
  const Real lambda = r.set("lambda_target") ? r.real("lambda_target") : 2.0;
  return std::sqrt(std::pow(2.0 * kPi, n) * mass_of_lambda(lambda, d));
}

RunConfig parse_run_config(const std::map<std::string, std::string>& raw) {
  std::map<std::string, std::string> values;
  for (const auto& [k, v] : config_keys()) values[k] = v;
  for (const auto& [k, v] : raw) {
    const auto it = values.find(k);
    if (it == values.end()) {
      std::string known;
      for (const auto& entry : config_keys()) known += (known.empty() ? "" : ", ") + entry.first;
      throw ConfigError("unknown configuration key '" + k + "' (valid keys: " + known + ")");
    }
    it->second = v;
  }
  const Reader r(values);
  RunConfig c;
  c.echo = values;
  c.out = r.str("out");
  require(!c.out.empty(), "out must not be empty");
  const long long seed = r.wide("seed");
  require(seed >= 0, "seed must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);

  c.grid.d = r.integer("d");
  c.grid.n = r.integer("n");
  c.grid.half_width = r.real("L");
  c.grid.points_x = r.integer("points_x");
  c.grid.points_y = r.integer("points_y");
  c.grid.validate();
  require(c.grid.d >= 1, "d must be >= 1");
  c.theta = resolve_theta(values, c.grid.d, c.grid.n);

  c.flow.theta = c.theta;
  c.flow.mu = r.real("mu");
  require(c.flow.mu > 0.0, "mu must be positive");
  c.flow.reg.eps_sat = r.real("eps_sat");
  c.flow.dt0 = r.real("dt0");
  c.flow.dt_min = r.real("dt_min");
  c.flow.dt_max = r.real("dt_max");
  c.flow.tol = r.real("tol");
  c.flow.max_steps = r.integer("max_steps");
  c.flow.init = init_kind_from_string(r.str("init"));
  c.init_file = r.str("init_file");
  c.flow.restarts = r.integer("restarts");
  c.flow.seed = c.seed;
  if (c.flow.init == InitKind::File) {
    require(!c.init_file.empty(), "init = file needs init_file");
    c.flow.initial = Field(c.grid); // placeholder, loaded at run time
  }
  c.flow.validate();

  c.mu_min_exp = r.real("mu_min_exp");
  c.mu_max_exp = r.real("mu_max_exp");
  c.mu_count = r.integer("mu_count");
  require(c.mu_count >= 3, "mu_count must be >= 3");
  require(c.mu_max_exp > c.mu_min_exp, "mu_max_exp must exceed mu_min_exp");
  c.warm_start = r.flag("warm_start");
  c.cold_check = r.flag("cold_check");

  c.evolve.dt = r.real("dt");
  c.evolve.steps = r.integer("steps");
  c.evolve.lambda_sign = r.integer("lambda_sign");
  c.evolve.record_every = r.integer("record_every");
  c.evolve.reg = c.flow.reg;
  c.evolve.validate();
  c.evolve_init = r.str("evolve_init");
  require(c.evolve_init == "groundstate" || c.evolve_init == "gausson" || c.evolve_init == "file",
          "evolve_init must be groundstate, gausson or file");
  require(c.evolve_init != "file" || !c.init_file.empty(), "evolve_init = file needs init_file");
  c.pert = r.real("pert");
  require(c.pert >= 0.0, "pert must be >= 0");
  const long long ps = r.wide("pert_seed");
  require(ps >= 0, "pert_seed must be >= 0");
  c.pert_seed = static_cast<std::uint64_t>(ps);
  c.snapshot_every = r.integer("snapshot_every");
  require(c.snapshot_every >= 0, "snapshot_every must be >= 0");

  c.a_count = r.integer("a_count");
  require(c.a_count >= 1, "a_count must be >= 1");
  c.eps_moll = r.real("eps_moll");
  require(c.eps_moll > 0.0 && kPi / (c.a_count + 1) > 2.0 * c.eps_moll,
          "eps_moll must be positive and below half of the smallest tent parameter pi / (a_count + 1)");
  c.ell = r.real("ell");
  require(c.ell > 0.0, "ell must be positive");
  c.r_min = r.real("r_min");
  c.r_max = r.real("r_max");
  c.r_count = r.integer("r_count");
  require(c.r_min > 0.0 && c.r_max >= c.r_min && c.r_count >= 1, "need 0 < r_min <= r_max and r_count >= 1");

  c.suite = r.str("suite");
  require(c.suite == "all" || c.suite == "scaling" || c.suite == "split" || c.suite == "gn" ||
              c.suite == "brezis-lieb" || c.suite == "subadditivity" || c.suite == "gronwall",
          "unknown suite '" + c.suite + "'");
  c.samples = r.integer("samples");
  require(c.samples >= 1, "samples must be >= 1");
  c.alpha = r.real("alpha");
  require(c.alpha > 0.0 && c.alpha < 4.0 / (c.grid.d + c.grid.n), "alpha must lie in (0, 4 / (d + n))");
  c.split_samples = static_cast<long>(r.wide("split_samples"));
  require(c.split_samples >= 1, "split_samples must be >= 1");
  c.ensemble = ensemble_kind_from_string(r.str("ensemble"));
  require(c.ensemble != EnsembleKind::TentTensor || c.grid.n >= 1, "tent-tensor ensembles need n >= 1");
  return c;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ground states and dynamics of the logarithmic Schroedinger equation on R^d x T^n", "logwg"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::string> out_flag, seed_flag, suite_flag;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"groundstate", "minimize the anisotropic energy on the mass sphere"},
      {"mu-scan", "minimize across mu and classify the y-dependence"},
      {"evolve", "split-step evolution and orbital distance to the ground state orbit"},
      {"bounds", "tent and eigenfunction test-field energy bounds"},
      {"verify", "property suites"},
      {"oracle", "closed-form Gausson values and sampled residual"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "key = value configuration file");
    sub->add_option("-s,--set", sets, "override one key, key=value (repeatable)");
    sub->add_option("-o,--out", out_flag, "output directory (key: out)");
    sub->add_option("--seed", seed_flag, "random seed (key: seed)");
    if (name == "verify") sub->add_option("--suite", suite_flag, "suite name or all (key: suite)");
  }
  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig config;
  try {
    std::map<std::string, std::string> raw;
    if (!config_path.empty()) raw = read_config_file(config_path);
    for (const std::string& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + s + "'");
      raw[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (out_flag) raw["out"] = *out_flag;
    if (seed_flag) raw["seed"] = *seed_flag;
    if (suite_flag) raw["suite"] = *suite_flag;
    if (const char* env = std::getenv("LOGNS_OUT"); env && *env) raw["out"] = env;
    config = parse_run_config(raw);
    preflight(command, config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  const fs::path dir = config.out;
  try {
    fs::create_directories(dir);
    fs::remove(dir / "manifest.json");
    fs::remove(dir / ".failed");
  } catch (const std::exception& e) {
    err << "error: cannot prepare output directory: " << e.what() << "\n";
    return kExitValidation;
  }

  const std::string started = utc_now();
  const RunContext ctx{config, out, err, dir};
  Outcome outcome;
  try {
    outcome = dispatch(command, ctx);
  } catch (const std::exception& e) {
    err << "error: " << command << " failed: " << e.what() << "\n";
    std::ofstream marker(dir / ".failed", std::ios::trunc);
    marker << command << ": " << e.what() << "\n";
    return kExitNumerical;
  }

  json manifest;
  manifest["format"] = kManifestFormat;
  manifest["version"] = kArtifactVersion;
  manifest["command"] = command;
  manifest["status"] = outcome.state;
  manifest["exit_status"] = outcome.status;
  manifest["started"] = started;
  manifest["finished"] = utc_now();
  json cfg = json::object();
  for (const auto& [k, v] : config.echo) cfg[k] = v;
  manifest["config"] = cfg;
  manifest["summary"] = outcome.summary;
  try {
    write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: cannot write manifest: " << e.what() << "\n";
    std::ofstream marker(dir / ".failed", std::ios::trunc);
    marker << "manifest: " << e.what() << "\n";
    return kExitNumerical;
  }
  return outcome.status;
}

int run_command(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_command(args, std::cout, std::cerr);
}

} // namespace logwg
