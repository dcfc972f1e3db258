#include "soliton/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "soliton/dynamics.hpp"
#include "soliton/embedding.hpp"
#include "soliton/errors.hpp"
#include "soliton/geometry.hpp"
#include "soliton/profile.hpp"
#include "soliton/report.hpp"
#include "soliton/ricci_flow.hpp"
#include "soliton/verify.hpp"

namespace soliton::cli {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
namespace fs = std::filesystem;
using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

json summary(const RunConfig& cfg) {
  json j;
  j["config"] = cfg.to_json();
  return j;
}

void maybe_svg(const RunConfig& cfg, const std::string& name, const std::string& title, const std::string& xl,
               const std::string& yl, const std::vector<report::Series>& series) {
  if (cfg.svg) report::write_text(cfg.output_dir / name, report::svg_line_plot(title, xl, yl, series));
}

int run_profile(const RunConfig& cfg, std::ostream& out) {
  const SolitonProfile p(cfg.n, cfg.tolerance);
  report::Table table{{"t", "phi", "phi1", "phi2", "f", "identity_residual"},
                      {"log|z|^2", "1", "1", "1", "1", "1"},
                      {}};
  const int n = cfg.n;
  double worst = 0.0;
  report::Series s_phi{"phi", {}, {}}, s_phi1{"phi'", {}, {}};
  for (double t : linspace(cfg.t_min, cfg.t_max, static_cast<std::size_t>(cfg.samples))) {
    const auto d = p.derivatives(t);
    const auto pot = p.potential(t);
    const double res = std::abs((n - 1) * d.phi1 / d.phi + d.phi2 / d.phi1 + d.phi1 - n);
    worst = std::max(worst, res);
    table.add_row({t, d.phi, d.phi1, d.phi2, pot.f, res});
    s_phi.x.push_back(t);
    s_phi.y.push_back(d.phi);
    s_phi1.x.push_back(t);
    s_phi1.y.push_back(d.phi1);
  }
  table.write_csv(cfg.output_dir / "profile.csv");
  json j = summary(cfg);
  j["max_identity_residual"] = worst;
  j["identity_tolerance"] = 1e-8;
  j["pass"] = worst <= 1e-8;
  report::write_json(cfg.output_dir / "profile.json", j);
  maybe_svg(cfg, "profile.svg", "soliton profile, n = " + std::to_string(n), "t = log|z|^2", "", {s_phi, s_phi1});
  out << "profile: max identity residual " << report::format_number(worst) << '\n';
  return 0;
}

int run_geometry(const RunConfig& cfg, std::ostream& out) {
  const SolitonProfile p(cfg.n, cfg.tolerance);
  const auto grid = linspace(cfg.t_min, cfg.t_max, static_cast<std::size_t>(cfg.samples));
  report::Table table{{"t", "R", "ric_transverse", "ric_radial", "grad_f_sq", "lemma_residual"},
                      {"log|z|^2", "1", "1", "1", "1", "1"},
                      {}};
  report::Series s_r{"R", {}, {}};
  for (double t : grid) {
    const auto c = curvature_at(p, t);
    table.add_row({t, c.R, c.ric_transverse, c.ric_radial, c.grad_f_sq, std::abs(c.R + c.grad_f_sq - cfg.n)});
    s_r.x.push_back(t);
    s_r.y.push_back(c.R);
  }
  table.write_csv(cfg.output_dir / "geometry.csv");

  const auto ids = identity_suite(p, grid);
  const auto asym = asymptotic_geometry_report(p, cfg.t_asymptotic);
  report::Table at{{"t", "s", "R", "R_times_s", "cp_diameter_ratio", "fiber_length", "volume", "vol_over_s_n",
                    "vol_over_s_2n"},
                   {"log|z|^2", "length", "1", "length", "1", "length", "volume", "1", "1"},
                   {}};
  report::Series s_rs{"R s", {}, {}}, s_fiber{"fiber length", {}, {}};
  for (const auto& r : asym.rows) {
    at.add_row({r.t, r.s, r.R, r.R_times_s, r.cp_diameter_ratio, r.fiber_length, r.volume, r.vol_over_s_n,
                r.vol_over_s_2n});
    s_rs.x.push_back(std::log10(r.s));
    s_rs.y.push_back(r.R_times_s);
    s_fiber.x.push_back(std::log10(r.s));
    s_fiber.y.push_back(r.fiber_length);
  }
  at.write_csv(cfg.output_dir / "geometry_asymptotics.csv");

  std::vector<PhasePoint> samples;
  for (double t : linspace(cfg.t_min, cfg.t_max, 41)) {
    RealVector x = RealVector::Zero(2 * cfg.n);
    x[0] = std::exp(0.5 * t);
    samples.emplace_back(x);
  }
  const auto conv = convexity_exhaustion_check(p, samples);

  json j = summary(cfg);
  j["identities"] = {{"lemma_constant", ids.lemma_constant}, {"lemma_max", ids.lemma_max},
                     {"gradient_identity_max", ids.eq5_max}, {"richardson_max", ids.richardson_max},
                     {"gradient_field_max", ids.gradient_field_max}, {"min_ricci", ids.min_ricci}};
  j["asymptotics"] = {{"R_times_s_last", asym.rows.back().R_times_s}, {"R_times_s_target", asym.R_times_s_target},
                      {"fiber_length_last", asym.rows.back().fiber_length}, {"fiber_target", asym.fiber_target},
                      {"vol_over_s_n_variation", asym.last_decade_variation_n},
                      {"vol_over_s_2n_variation", asym.last_decade_variation_2n}, {"bounded", asym.bounded}};
  j["convexity"] = {{"min_hessian_eigenvalue", conv.min_hessian_eigenvalue}, {"max_grad_f_sq", conv.max_grad_f_sq},
                    {"properness_gap", conv.properness_gap}, {"f_increasing", conv.f_increasing},
                    {"passed", conv.passed()}};
  j["pass"] = ids.lemma_max <= 1e-8 && ids.eq5_max <= 1e-6 && conv.passed();
  report::write_json(cfg.output_dir / "geometry.json", j);
  maybe_svg(cfg, "curvature.svg", "scalar curvature, n = " + std::to_string(cfg.n), "t = log|z|^2", "R", {s_r});
  maybe_svg(cfg, "asymptotics.svg", "curvature decay and fiber length", "log10 s", "", {s_rs, s_fiber});
  out << "geometry: lemma residual " << report::format_number(ids.lemma_max) << ", R s -> "
      << report::format_number(asym.rows.back().R_times_s) << '\n';
  return 0;
}

int run_orbits(const RunConfig& cfg, std::ostream& out) {
  const SolitonProfile p(cfg.n, cfg.tolerance);
  const RadialHamiltonian H(p);
  IntegratorOptions opt;
  opt.step = cfg.step;

  report::Table table{{"level", "t", "status", "period", "closure_error", "g_length", "expected_g_length", "action",
                       "level_drift"},
                      {"1", "log|z|^2", "0=closed,1=constant,2=no_closure", "time", "length", "length", "length",
                       "area", "1"},
                      {}};
  report::Series s_len{"g_length", {}, {}}, s_exp{"2 pi sqrt(phi')", {}, {}};
  json rows = json::array();
  double worst_len = 0.0, worst_period = 0.0;
  auto record = [&](const OrbitResult& o) {
    const double t = std::log(o.seed.norm_sq());
    const double expected = kTwoPi * std::sqrt(p.derivatives(t).phi1);
    const auto m = o.status == OrbitStatus::Closed ? orbit_metrics(p, o) : OrbitMetrics{};
    table.add_row({o.level, t, static_cast<double>(o.status), o.period, o.closure_error, m.g_length, expected,
                   m.action, o.level_drift});
    if (o.status == OrbitStatus::Closed) {
      worst_len = std::max(worst_len, std::abs(m.g_length / expected - 1.0));
      worst_period = std::max(worst_period, std::abs(o.period - kTwoPi));
      s_len.x.push_back(o.level);
      s_len.y.push_back(m.g_length);
      s_exp.x.push_back(o.level);
      s_exp.y.push_back(expected);
    }
  };
  for (const auto& e : scan_levels_for_orbits(p, H, cfg.levels, opt)) {
    if (!e.orbit) throw SolverFault("orbit at level " + report::format_number(e.level) + ": " + e.error);
    record(*e.orbit);
  }
  if (cfg.random_seeds > 0) {
    const auto seeds = sample_points(cfg.n, static_cast<std::size_t>(cfg.random_seeds), -3.0, 3.0, cfg.seed);
    for (const auto& s : seeds) record(integrate_orbit(p, H, s, opt));
  }
  table.write_csv(cfg.output_dir / "orbits.csv");

  json j = summary(cfg);
  j["max_period_error"] = worst_period;
  j["max_relative_length_error"] = worst_len;
  if (cfg.perturbation != 0.0) {
    const auto Hp = PerturbedHamiltonian::linear_x1(p, cfg.perturbation);
    ShootOptions so;
    so.integrator = opt;
    RealVector x = RealVector::Zero(2 * cfg.n);
    x[0] = 1.0;
    const auto sh = shoot_periodic(p, Hp, PhasePoint(x), kTwoPi, so);
    j["perturbed"] = {{"epsilon", cfg.perturbation}, {"converged", sh.converged}, {"iterations", sh.iterations},
                      {"residual", sh.residual}, {"period", sh.orbit.period}, {"message", sh.message}};
  }
  j["pass"] = worst_period <= 1e-5 && worst_len <= 1e-6;
  report::write_json(cfg.output_dir / "orbits.json", j);
  maybe_svg(cfg, "orbit_lengths.svg", "Hopf orbit lengths, n = " + std::to_string(cfg.n), "level of f", "length",
            {s_len, s_exp});
  out << "orbits: " << table.rows.size() << " orbits, max period error " << report::format_number(worst_period)
      << '\n';
  return 0;
}

int run_flow(const RunConfig& cfg, std::ostream& out) {
  const SolitonProfile p(cfg.n, cfg.tolerance);
  FlowState state;
  if (cfg.initial == "flat") {
    state = FlowState::flat(cfg.n, cfg.t_min, cfg.t_max, cfg.dt);
  } else {
    const auto rb = cfg.right_boundary == "asymptotic" ? RightBoundary::Asymptotic : RightBoundary::Travelling;
    state = FlowState::soliton(p, cfg.t_min, cfg.t_max, cfg.dt, rb);
    if (cfg.initial == "bump") {
      for (std::size_t i = 0; i < state.size(); ++i) {
        state.phi[i] *= 1.0 + cfg.bump_amplitude * std::exp(-state.t(i) * state.t(i));
      }
      check_flow_invariants(state);
    }
  }
  const auto steps = static_cast<std::size_t>(std::llround(cfg.tau_end / cfg.d_tau));
  const bool soliton_family = cfg.initial != "flat";

  report::Series history{"sup distance to soliton family", {}, {}};
  json dumps = json::array();
  int dump_index = 0;
  auto dump = [&](const FlowState& s) {
    report::Table snap{{"t", "phi", "phi1", "R"}, {"log|z|^2", "1", "1", "1"}, {}};
    for (const auto& r : snapshot(s)) snap.add_row({r.t, r.phi, r.phi1, r.R});
    char name[64];
    std::snprintf(name, sizeof name, "flow_%04d.csv", dump_index++);
    snap.write_csv(cfg.output_dir / name);
    json d{{"file", name}, {"tau", s.tau}};
    if (soliton_family) {
      const auto dev = soliton_deviation(s, p);
      d["best_shift"] = dev.best_shift;
      d["sup_error"] = dev.sup_error;
      history.x.push_back(s.tau);
      history.y.push_back(dev.sup_error);
    }
    dumps.push_back(d);
  };
  if (cfg.dump_every > 0) dump(state);
  const FlowState initial = state;
  state = evolve(state, cfg.d_tau, steps, [&](const FlowState& s, std::size_t) { dump(s); },
                 static_cast<std::size_t>(cfg.dump_every));

  json j = summary(cfg);
  j["tau"] = state.tau;
  j["steps"] = steps;
  j["snapshots"] = dumps;
  j["gauge_residual"] = gauge_residual(state);
  bool pass = true;
  if (cfg.initial == "soliton") {
    const auto dev = soliton_deviation(state, p);
    j["best_shift"] = dev.best_shift;
    j["sup_error"] = dev.sup_error;
    j["travelling_wave_error"] = travelling_wave_error(state, p);
    pass = state.tau == 0.0 || std::abs(dev.best_shift / state.tau - 1.0) <= 0.01;
  } else if (cfg.initial == "flat") {
    double change = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
      change = std::max(change, std::abs(state.phi[i] - initial.phi[i]) / initial.phi[i]);
    }
    j["max_relative_change"] = change;
    pass = change <= 1e-10 * std::max<double>(1.0, static_cast<double>(steps));
  } else {
    const auto dev = soliton_deviation(state, p);
    j["final_sup_distance"] = dev.sup_error;
    j["initial_sup_distance"] = soliton_deviation(initial, p).sup_error;
  }
  j["pass"] = pass;
  report::write_json(cfg.output_dir / "flow.json", j);
  if (!history.x.empty()) {
    maybe_svg(cfg, "flow_deviation.svg", "distance to the translated soliton family", "tau", "sup error", {history});
  }
  out << "flow: tau " << report::format_number(state.tau) << '\n';
  return 0;
}

int run_embed(const RunConfig& cfg, std::ostream& out) {
  const SolitonProfile p(cfg.n, cfg.tolerance);
  const auto samples = sample_points(cfg.n, static_cast<std::size_t>(cfg.embed_samples), cfg.t_min, cfg.t_max, cfg.seed);
  json j = summary(cfg);
  std::vector<FormTag> tags;
  if (cfg.tag != "omega") tags.push_back(FormTag::Ricci);
  if (cfg.tag != "rho") tags.push_back(FormTag::Kahler);
  double worst = 0.0;
  for (auto tag : tags) {
    const double res = pullback_residual(build_map(p, tag), samples);
    j["pullback_residual"][to_string(tag)] = res;
    worst = std::max(worst, res);
  }

  const SymplecticMap rho(p, FormTag::Ricci), omega(p, FormTag::Kahler);
  report::Table map_table{{"t", "a_rho", "a_omega", "radius_sq_rho", "radius_sq_omega"},
                          {"log|z|^2", "1", "1", "area/pi", "area/pi"},
                          {}};
  report::Series s_rho{"rho image radius^2", {}, {}}, s_omega{"omega image radius^2", {}, {}};
  for (double t : linspace(cfg.t_min, cfg.t_max, 201)) {
    map_table.add_row({t, rho.scale(t), omega.scale(t), rho.image_radius_sq(t), omega.image_radius_sq(t)});
    s_rho.x.push_back(t);
    s_rho.y.push_back(rho.image_radius_sq(t));
    s_omega.x.push_back(t);
    s_omega.y.push_back(omega.image_radius_sq(t));
  }
  map_table.write_csv(cfg.output_dir / "embed_map.csv");

  report::Table cap{{"c", "t_c", "lower", "upper", "image_radius_sq"}, {"1", "log|z|^2", "area", "area", "area/pi"}, {}};
  bool ordered = true;
  for (double c : cfg.levels) {
    const auto cb = capacity_bounds(p, c);
    cap.add_row({c, cb.t_c, cb.lower, cb.upper, cb.image_radius_sq});
    ordered = ordered && cb.lower <= cb.upper;
  }
  cap.write_csv(cfg.output_dir / "embed_capacity.csv");

  // Composition into (X, rho) needs the omega-image inside the rho-image ball.
  const auto inner = sample_points(cfg.n, 200, cfg.t_min, std::min(cfg.t_max, p.t_of_phi(0.9 * cfg.n)), cfg.seed + 1);
  j["composition_residual"] = composition_residual(p, inner);
  j["lower_le_upper"] = ordered;
  j["pass"] = worst <= 1e-7 && ordered && j["composition_residual"].get<double>() <= 1e-7;
  report::write_json(cfg.output_dir / "embed.json", j);
  maybe_svg(cfg, "embedding.svg", "image radius of the sphere at t", "t = log|z|^2", "|w|^2", {s_rho, s_omega});
  out << "embed: max pullback residual " << report::format_number(worst) << '\n';
  return 0;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  verify::Options opt;
  opt.only = cfg.only;
  opt.seed = cfg.seed;
  for (const auto& kv : cfg.tolerance_overrides) {
    const auto eq = kv.find('=');
    require(eq != std::string::npos, "--tol expects ID=value, got '" + kv + "'");
    try {
      opt.tolerance_overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw ValidationError("--tol value is not a number: '" + kv + "'");
    }
  }
  const auto results = verify::verify_all(opt);
  json j = verify::to_json(results);
  j["config"] = cfg.to_json();
  report::write_json(cfg.output_dir / "verify.json", j);
  for (const auto& r : results) out << verify::summary_line(r) << '\n';
  return j["all_pass"].get<bool>() ? 0 : 1;
}

std::vector<std::string> split_list(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& s : in) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(item);
    }
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  require(n >= 1 && n <= 64, "n must be in [1, 64]");
  require(std::isfinite(t_min) && std::isfinite(t_max) && t_min < t_max, "need t_min < t_max");
  require(samples >= 2, "samples must be at least 2");
  require(tolerance > 0.0, "tolerance must be positive");
  require(step > 0.0, "step must be positive");
  require(t_asymptotic >= 10.0, "t-asymptotic must be at least 10");
  for (double l : levels) require(l > 0.0, "levels must be positive");
  require(random_seeds >= 0, "random-seeds must be nonnegative");
  require(dt > 0.0 && d_tau > 0.0, "dt and d-tau must be positive");
  require(tau_end >= 0.0, "tau-end must be nonnegative");
  require(dump_every >= 0, "dump-every must be nonnegative");
  require(initial == "soliton" || initial == "flat" || initial == "bump", "initial must be soliton, flat or bump");
  require(right_boundary == "travelling" || right_boundary == "asymptotic",
          "right-boundary must be travelling or asymptotic");
  require(tag == "rho" || tag == "omega" || tag == "both", "tag must be rho, omega or both");
  require(embed_samples >= 1, "samples must be positive");
  require(!output_dir.empty(), "output directory must be set");
}

json RunConfig::to_json() const {
  json j;
  j["subcommand"] = subcommand;
  j["n"] = n;
  j["t_min"] = t_min;
  j["t_max"] = t_max;
  j["samples"] = samples;
  j["tolerance"] = tolerance;
  j["output_dir"] = output_dir.string();
  j["svg"] = svg;
  j["t_asymptotic"] = t_asymptotic;
  j["levels"] = levels;
  j["step"] = step;
  j["random_seeds"] = random_seeds;
  j["seed"] = seed;
  j["perturbation"] = perturbation;
  j["dt"] = dt;
  j["d_tau"] = d_tau;
  j["tau_end"] = tau_end;
  j["dump_every"] = dump_every;
  j["initial"] = initial;
  j["right_boundary"] = right_boundary;
  j["bump_amplitude"] = bump_amplitude;
  j["tag"] = tag;
  j["embed_samples"] = embed_samples;
  j["only"] = only;
  j["tolerance_overrides"] = tolerance_overrides;
  return j;
}

std::vector<std::string> config_file_tokens(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read config file " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value == "true" || value == "false") {
      if (value == "true") tokens.push_back("--" + key);
      continue;
    }
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv(kOutputEnv); env && *env) {
    cfg.output_dir = env;
  } else {
    cfg.output_dir = "soliton_out";
  }

  CLI::App app{"Numerical laboratory for rotationally symmetric gradient Kahler-Ricci solitons", "soliton_lab"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Flat key=value file; command-line flags take precedence");

  std::vector<std::string> level_tokens, only_tokens;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "Complex dimension");
    sub->add_option("--t-min", cfg.t_min, "Lower end of the t = log|z|^2 range");
    sub->add_option("--t-max", cfg.t_max, "Upper end of the t range");
    sub->add_option("--tol", cfg.tolerance, "Profile solver tolerance");
    sub->add_option("--out", cfg.output_dir, "Output directory (default $SOLITON_LAB_OUT or ./soliton_out)");
    sub->add_flag("--svg", cfg.svg, "Also write SVG plots");
  };

  auto* profile = app.add_subcommand("profile", "Tabulate phi, its derivatives, f and the identity residual");
  common(profile);
  profile->add_option("--samples", cfg.samples, "Grid points");

  auto* geometry = app.add_subcommand("geometry", "Curvature identities, convexity and asymptotic geometry");
  common(geometry);
  geometry->add_option("--samples", cfg.samples, "Grid points");
  geometry->add_option("--t-asymptotic", cfg.t_asymptotic, "Largest t for the asymptotic table");

  auto* orbits = app.add_subcommand("orbits", "Periodic orbits of H = f on level sets");
  common(orbits);
  orbits->add_option("--levels", level_tokens, "Comma-separated levels of f")->delimiter(',');
  orbits->add_option("--step", cfg.step, "Integrator step");
  orbits->add_option("--random-seeds", cfg.random_seeds, "Additional random seeds");
  orbits->add_option("--seed", cfg.seed, "RNG seed");
  orbits->add_option("--perturb", cfg.perturbation, "Shoot for an orbit of f + eps x1");

  auto* flow = app.add_subcommand("flow", "Evolve the radial Ricci flow");
  common(flow);
  flow->add_option("--dt", cfg.dt, "Grid spacing in t");
  flow->add_option("--d-tau", cfg.d_tau, "Flow time step");
  flow->add_option("--tau-end", cfg.tau_end, "Final flow time");
  flow->add_option("--dump-every", cfg.dump_every, "Write a snapshot every k steps (0: none)");
  flow->add_option("--initial", cfg.initial, "soliton, flat or bump");
  flow->add_option("--right-boundary", cfg.right_boundary, "travelling or asymptotic");
  flow->add_option("--bump-amplitude", cfg.bump_amplitude, "Relative bump height for --initial bump");

  auto* embed = app.add_subcommand("embed", "Radial symplectic embeddings and capacity bounds");
  common(embed);
  embed->add_option("--tag", cfg.tag, "rho, omega or both");
  embed->add_option("--samples", cfg.embed_samples, "Random sample points for the pullback check");
  embed->add_option("--seed", cfg.seed, "RNG seed");
  embed->add_option("--levels", level_tokens, "Comma-separated levels c of f for capacity bounds")->delimiter(',');

  auto* verify_cmd = app.add_subcommand("verify-all", "Run the acceptance criteria C1-C10");
  verify_cmd->add_option("--only", only_tokens, "Run only these criteria (comma-separated)")->delimiter(',');
  verify_cmd->add_option("--tol", cfg.tolerance_overrides, "Override a headline tolerance, ID=value")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  verify_cmd->add_option("--seed", cfg.seed, "RNG seed");
  verify_cmd->add_option("--out", cfg.output_dir, "Output directory");

  // Splice config-file tokens right after the subcommand name so explicit
  // flags, which come later, win under TakeLast.
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }

  try {
    if (!config_path.empty()) {
      const auto tokens = config_file_tokens(config_path);
      std::size_t pos = 0;
      while (pos < args.size() && args[pos].rfind("-", 0) == 0) ++pos;
      args.insert(args.begin() + static_cast<long>(std::min(pos + 1, args.size())), tokens.begin(), tokens.end());
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.subcommand = chosen->get_name();
  try {
    for (const auto& s : split_list(level_tokens)) cfg.levels.push_back(std::stod(s));
  } catch (const std::exception&) {
    err << "error: --levels expects numbers\n\n" << chosen->help();
    return 1;
  }
  cfg.only = split_list(only_tokens);
  if (cfg.levels.empty()) {
    if (cfg.subcommand == "orbits") cfg.levels = {0.2, 0.5, 0.69};
    if (cfg.subcommand == "embed") cfg.levels = {0.25, 0.5, std::log(2.0), 1.0};
  }

  try {
    cfg.validate();
    if (cfg.subcommand == "profile") return run_profile(cfg, out);
    if (cfg.subcommand == "geometry") return run_geometry(cfg, out);
    if (cfg.subcommand == "orbits") return run_orbits(cfg, out);
    if (cfg.subcommand == "flow") return run_flow(cfg, out);
    if (cfg.subcommand == "embed") return run_embed(cfg, out);
    return run_verify(cfg, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n\n" << chosen->help();
    return 1;
  } catch (const NumericFault& e) {
    json j = summary(cfg);
    j["pass"] = false;
    j["error"] = e.what();
    if (const auto* inv = dynamic_cast<const InvariantViolation*>(&e)) j["invariant"] = inv->invariant();
    try {
      report::write_json(cfg.output_dir / (cfg.subcommand + ".json"), j);
    } catch (const std::exception&) {
    }
    err << "numeric fault: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace soliton::cli
