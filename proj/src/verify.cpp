#include "soliton/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "soliton/dynamics.hpp"
#include "soliton/embedding.hpp"
#include "soliton/errors.hpp"
#include "soliton/geometry.hpp"
#include "soliton/profile.hpp"
#include "soliton/report.hpp"
#include "soliton/ricci_flow.hpp"

namespace soliton::verify {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Check le(std::string name, double measured, double tol) {
  Check c;
  c.name = std::move(name);
  c.measured = measured;
  c.tolerance = tol;
  c.passed = std::isfinite(measured) && measured <= tol;
  return c;
}

Check within(std::string name, double measured, double lo, double hi) {
  Check c;
  c.name = std::move(name);
  c.measured = measured;
  c.relation = "in";
  c.lo = lo;
  c.hi = hi;
  c.tolerance = 0.5 * (hi - lo);
  c.passed = measured >= lo && measured <= hi;
  return c;
}

double headline_tol(const Options& opt, const std::string& id, double fallback) {
  const auto it = opt.tolerance_overrides.find(id);
  return it == opt.tolerance_overrides.end() ? fallback : it->second;
}

void c1(CriterionResult& r, const Options& opt) {
  const SolitonProfile p(1);
  double worst = 0.0;
  for (double t : linspace(-30.0, 30.0, 2001)) {
    worst = std::max(worst, std::abs(p.phi(t) - std::log1p(std::exp(t))));
  }
  r.checks.push_back(le("max |phi - log(1+e^t)|", worst, headline_tol(opt, "C1", 1e-10)));
}

void c2(CriterionResult& r, const Options& opt) {
  const auto grid = linspace(-10.0, 10.0, 2001);
  double worst = 0.0, fd_worst = 0.0;
  const double h = 1e-4;
  for (int n = 1; n <= 4; ++n) {
    const SolitonProfile p(n);
    double wn = 0.0;
    for (double t : grid) {
      const auto d = p.derivatives(t);
      wn = std::max(wn, std::abs((n - 1) * d.phi1 / d.phi + d.phi2 / d.phi1 + d.phi1 - n));
      const double fd = (p.derivatives(t + h).phi1 - p.derivatives(t - h).phi1) / (2.0 * h);
      fd_worst = std::max(fd_worst, std::abs(fd - d.phi2));
    }
    r.details["max_residual_n" + std::to_string(n)] = wn;
    worst = std::max(worst, wn);
  }
  r.checks.push_back(le("max log-derivative identity residual, n=1..4", worst, headline_tol(opt, "C2", 1e-8)));
  r.checks.push_back(le("max |phi2 - centered difference of phi1|", fd_worst, 1e-6));
}

void c3(CriterionResult& r, const Options& opt) {
  const auto grid = linspace(-10.0, 10.0, 2001);
  double worst = 0.0, worst_scaled = 0.0, rmax_err = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const SolitonProfile p(n);
    const auto rep = identity_suite(p, grid);
    worst = std::max(worst, rep.lemma_max);
    const double scale = unit_curvature_scale(n);
    const auto scaled = identity_suite(p, grid, 1e-4, scale);
    worst_scaled = std::max(worst_scaled, std::abs(scaled.lemma_constant - 1.0) + scaled.lemma_max);
    // R = n - phi' is maximal at the origin; sample down to t = -40.
    double rmax = 0.0;
    for (double t : linspace(-40.0, 10.0, 501)) rmax = std::max(rmax, curvature_at(p, t, scale).R);
    rmax_err = std::max(rmax_err, std::abs(rmax - 1.0));
    r.details["lemma_max_n" + std::to_string(n)] = rep.lemma_max;
  }
  r.checks.push_back(le("max |R + |grad f|^2 - n|, n=1..4", worst, headline_tol(opt, "C3", 1e-8)));
  r.checks.push_back(le("rescaled: |C - 1| + max residual", worst_scaled, 1e-8));
  r.checks.push_back(le("rescaled: |R_max - 1|", rmax_err, 1e-8));
}

void c4(CriterionResult& r, const Options& opt) {
  const auto grid = linspace(-10.0, 10.0, 2001);
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const auto rep = identity_suite(SolitonProfile(n), grid, 1e-4);
    r.details["eq_max_n" + std::to_string(n)] = rep.eq5_max;
    worst = std::max(worst, rep.eq5_max);
  }
  r.checks.push_back(le("max |dR/dt + phi2| (h = 1e-4)", worst, headline_tol(opt, "C4", 1e-6)));
}

void c5(CriterionResult& r, const Options& opt) {
  const SolitonProfile p1(1);
  const double s1 = std::abs(p1.derivatives(50.0).phi1 - 1.0);
  r.checks.push_back(le("n=1: |phi'(50) - 1|", s1, headline_tol(opt, "C5", 1e-10)));
  for (int n = 2; n <= 4; ++n) {
    const auto rep = asymptote_report(SolitonProfile(n), 50.0);
    const auto& row = rep.at_T();
    r.checks.push_back(le("n=" + std::to_string(n) + ": |phi'(50) - n|", row.slope_error, 0.05 * (n - 1) + 1e-6));
    r.checks.push_back(within("n=" + std::to_string(n) + ": phi(50)/50", row.phi_over_T, n - 0.25, n));
  }
}

void c6(CriterionResult& r, const Options& opt) {
  std::mt19937 rng(opt.seed);
  std::uniform_real_distribution<double> log_radius(-3.0, 3.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double closure = 0.0, period = 0.0, length = 0.0;
  int count = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 3;
    const SolitonProfile p(n);
    const RadialHamiltonian H(p);
    RealVector v(2 * n);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
    const double t = log_radius(rng);
    const PhasePoint seed(RealVector(v.normalized() * std::exp(0.5 * t)));
    const auto orbit = integrate_orbit(p, H, seed);
    if (orbit.status != OrbitStatus::Closed) {
      closure = std::numeric_limits<double>::infinity();
      continue;
    }
    const auto m = orbit_metrics(p, orbit);
    const double expected = kTwoPi * std::sqrt(p.derivatives(t).phi1);
    closure = std::max(closure, orbit.closure_error);
    period = std::max(period, std::abs(orbit.period - kTwoPi));
    length = std::max(length, std::abs(m.g_length / expected - 1.0));
    ++count;
  }
  r.details["closed_orbits"] = count;
  r.checks.push_back(le("max closure error (100 seeds)", closure, headline_tol(opt, "C6", 1e-8)));
  r.checks.push_back(le("max |period - 2 pi|", period, 1e-5));
  r.checks.push_back(le("max relative g_length error vs 2 pi sqrt(phi')", length, 1e-6));
  const SolitonProfile p(1);
  const auto cigar = integrate_orbit(p, RadialHamiltonian(p), PhasePoint{1.0, 0.0});
  const double cl = orbit_metrics(p, cigar).g_length;
  r.checks.push_back(le("cigar |z|=1: relative error vs 2 pi / sqrt 2", std::abs(cl / (kTwoPi / std::sqrt(2.0)) - 1.0), 1e-6));
}

void c7(CriterionResult& r, const Options& opt) {
  const SolitonProfile p(1);
  const auto evolved = evolve(FlowState::soliton(p), 1e-4, 10000);
  const auto dev = soliton_deviation(evolved, p);
  r.checks.push_back(le("|best_shift - 1| at tau = 1", std::abs(dev.best_shift - 1.0), headline_tol(opt, "C7", 5e-3)));
  r.details["best_shift"] = dev.best_shift;

  std::vector<double> errors;
  for (double dt : {4e-2, 2e-2, 1e-2}) {
    const auto steps = static_cast<std::size_t>(std::llround(1.0 / (dt * dt)));
    const auto s = evolve(FlowState::soliton(p, -12.0, 12.0, dt), 1.0 / static_cast<double>(steps), steps);
    errors.push_back(travelling_wave_error(s, p));
  }
  const double order = std::min(std::log2(errors[0] / errors[1]), std::log2(errors[1] / errors[2]));
  r.details["wave_errors"] = errors;
  Check oc = le("observed spatial order (min over refinements)", order, 1.9);
  oc.relation = ">=";
  oc.passed = order >= 1.9;
  r.checks.push_back(oc);

  double change = 0.0, absolute = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const auto f0 = FlowState::flat(n);
    const auto f1 = evolve(f0, 1e-2, 1);
    for (std::size_t i = 0; i < f0.size(); ++i) {
      change = std::max(change, std::abs(f1.phi[i] - f0.phi[i]) / f0.phi[i]);
      absolute = std::max(absolute, std::abs(f1.phi[i] - f0.phi[i]));
    }
  }
  r.details["flat_max_absolute_change"] = absolute;
  r.checks.push_back(le("flat profile: max relative change per step", change, 1e-10));
}

void c8(CriterionResult& r, const Options& opt) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const SolitonProfile p(n);
    const auto samples = sample_points(n, 1000, -8.0, 8.0, opt.seed + static_cast<unsigned>(n));
    for (auto tag : {FormTag::Ricci, FormTag::Kahler}) {
      const double res = pullback_residual(build_map(p, tag), samples);
      r.details[std::string("pullback_") + to_string(tag) + "_n" + std::to_string(n)] = res;
      worst = std::max(worst, res);
    }
  }
  r.checks.push_back(le("max pullback residual, both forms, n=1..3", worst, headline_tol(opt, "C8", 1e-7)));
  const auto cb = capacity_bounds(SolitonProfile(1), std::log(2.0));
  const double lower_target = kTwoPi * std::log(2.0);
  const double upper_target = kTwoPi * std::numbers::pi * std::numbers::pi / 12.0;
  r.details["lower"] = cb.lower;
  r.details["upper"] = cb.upper;
  r.checks.push_back(le("n=1, c=log 2: |lower / (2 pi log 2) - 1|", std::abs(cb.lower / lower_target - 1.0), 1e-3));
  r.checks.push_back(le("n=1, c=log 2: |upper / 5.168 - 1|", std::abs(cb.upper / upper_target - 1.0), 1e-3));
  r.checks.push_back(le("lower - upper", cb.lower - cb.upper, 0.0));
}

void c9(CriterionResult& r, const Options& opt) {
  const SolitonProfile p(2);
  const auto rep = asymptotic_geometry_report(p, 1e4, 40);
  r.checks.push_back(le("Vol/s^4 last-decade variation", rep.last_decade_variation_2n, headline_tol(opt, "C9", 0.05)));
  r.details["vol_over_s_n_last_decade_variation"] = rep.last_decade_variation_n;
  const double rs = rep.rows.back().R_times_s;
  r.details["R_times_s"] = rs;
  r.checks.push_back(le("|R s / (sqrt 2 / 2) - 1|", std::abs(rs / rep.R_times_s_target - 1.0), 0.10));
  const double fiber = kTwoPi * std::sqrt(p.derivatives(50.0).phi1);
  r.checks.push_back(le("|fiber length(50) / (2 pi sqrt 2) - 1|", std::abs(fiber / rep.fiber_target - 1.0), 0.01));
}

void c10(CriterionResult& r, const Options& opt) {
  const double c = std::log(2.0);
  auto admissible = [&](double slope) {
    return check_admissible(AdmissibleHamiltonian::make(1, c, slope / kTwoPi)).admissible();
  };
  double lo = 0.5 * kTwoPi, hi = 1.5 * kTwoPi;
  if (!admissible(lo) || admissible(hi)) throw SolverFault("admissibility predicate does not flip on the bracket");
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? lo : hi) = mid;
  }
  const double threshold = 0.5 * (lo + hi);
  r.details["threshold"] = threshold;
  r.details["bracket_width"] = hi - lo;
  r.checks.push_back(le("|threshold slope - 2 pi|", std::abs(threshold - kTwoPi), headline_tol(opt, "C10", 1e-6)));
}

using Runner = void (*)(CriterionResult&, const Options&);

struct Entry {
  const char* id;
  const char* title;
  Runner run;
};

const Entry kEntries[] = {
    {"C1", "cigar closed form", c1},
    {"C2", "log-derivative identity", c2},
    {"C3", "R + |grad f|^2 constant", c3},
    {"C4", "radial curvature gradient identity", c4},
    {"C5", "large-t asymptotics", c5},
    {"C6", "periodic orbits of H = f", c6},
    {"C7", "Ricci flow travelling wave", c7},
    {"C8", "symplectic embeddings and capacity bounds", c8},
    {"C9", "volume growth and curvature decay", c9},
    {"C10", "admissibility threshold", c10},
};

const Entry& find(const std::string& id) {
  for (const auto& e : kEntries) {
    if (id == e.id) return e;
  }
  throw ValidationError("unknown criterion '" + id + "'");
}

}  // namespace

bool CriterionResult::passed() const {
  if (!error.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const std::vector<std::string>& criterion_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& e : kEntries) v.emplace_back(e.id);
    return v;
  }();
  return ids;
}

std::string criterion_title(const std::string& id) { return find(id).title; }

CriterionResult run_criterion(const std::string& id, const Options& opt) {
  const Entry& e = find(id);
  CriterionResult r;
  r.id = e.id;
  r.title = e.title;
  try {
    e.run(r, opt);
  } catch (const InvariantViolation& ex) {
    r.error = ex.what();
    r.invariant = ex.invariant();
  } catch (const std::exception& ex) {
    r.error = ex.what();
  }
  return r;
}

std::vector<CriterionResult> verify_all(const Options& opt) {
  for (const auto& id : opt.only) find(id);
  for (const auto& [id, tol] : opt.tolerance_overrides) find(id);
  std::vector<CriterionResult> out;
  for (const auto& id : criterion_ids()) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
    out.push_back(run_criterion(id, opt));
  }
  return out;
}

nlohmann::json to_json(const CriterionResult& r) {
  nlohmann::json j;
  j["title"] = r.title;
  j["pass"] = r.passed();
  if (!r.checks.empty()) {
    j["measured"] = r.checks.front().measured;
    j["tolerance"] = r.checks.front().tolerance;
  }
  auto checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json cj{{"name", c.name}, {"measured", c.measured}, {"relation", c.relation}, {"pass", c.passed}};
    if (c.relation == "in") {
      cj["lo"] = c.lo;
      cj["hi"] = c.hi;
    } else {
      cj["tolerance"] = c.tolerance;
    }
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["details"] = r.details;
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.invariant.empty()) j["invariant"] = r.invariant;
  return j;
}

nlohmann::json to_json(const std::vector<CriterionResult>& results) {
  nlohmann::json j = nlohmann::json::object();
  bool all = true;
  for (const auto& r : results) {
    j["criteria"][r.id] = to_json(r);
    all = all && r.passed();
  }
  j["all_pass"] = all;
  return j;
}

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string summary_line(const CriterionResult& r) {
  std::ostringstream o;
  o << r.id << ' ' << (r.passed() ? "PASS" : "FAIL") << "  " << r.title;
  if (!r.error.empty()) {
    o << "  error: " << r.error;
    return o.str();
  }
  for (const auto& c : r.checks) {
    o << " | " << (c.passed ? "" : "FAIL ") << c.name << " = " << short_number(c.measured);
    if (c.relation == "in") {
      o << " in [" << short_number(c.lo) << ", " << short_number(c.hi) << "]";
    } else {
      o << ' ' << c.relation << ' ' << short_number(c.tolerance);
    }
  }
  return o.str();
}

}  // namespace soliton::verify
