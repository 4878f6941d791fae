#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "ncsir/analysis.hpp"
#include "ncsir/equilibria.hpp"
#include "ncsir/integrate.hpp"
#include "ncsir/scenario.hpp"
#include "ncsir/serialize.hpp"
#include "ncsir/verify.hpp"

#ifndef NCSIR_VERSION
#define NCSIR_VERSION "0.0.0"
#endif

namespace ncsir::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kReportedFig5Bound = 0.0171;

struct Options {
  std::string preset;
  std::string config;
  std::uint64_t seed = 20240601;
  std::size_t paths = 500;
  std::optional<double> dt;
  std::optional<double> tmax;
  std::string out = "out";
  std::string mode = "sde";
  std::string variant;
  bool gamma_as_printed = false;
  bool quick = false;
  bool no_correction = false;
};

class UsageError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Scenario resolve(const Options& o) {
  if (o.preset.empty() == o.config.empty()) throw UsageError("exactly one of --preset and --config is required");
  Scenario sc = [&] {
    if (!o.preset.empty()) return preset(o.preset, o.gamma_as_printed);
    std::ifstream in(o.config);
    if (!in) throw std::invalid_argument("cannot open config '" + o.config + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    return scenario_from_json(j);
  }();
  if (!o.variant.empty()) {
    ParamValues v = sc.params.values();
    v.variant = noise_variant_from_string(o.variant);
    sc.params = ModelParams(v);
  }
  if (o.dt) sc.cfg.dt = *o.dt;
  if (o.tmax) sc.cfg.t_max = *o.tmax;
  if (o.no_correction) sc.cfg.scheme = Scheme::EulerMaruyama;
  sc.cfg.step_count();
  return sc;
}

fs::path output_dir(const Options& o, const Scenario& sc, const char* command) {
  const fs::path dir = fs::path(o.out) / sc.name / command;
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream f(path);
  f << j.dump(2) << '\n';
}

Json manifest(const char* command, const Scenario& sc, const Options& o) {
  Json m;
  m["artifact"] = "ncsir";
  m["version"] = NCSIR_VERSION;
  m["command"] = command;
  m["scenario"] = to_json(sc);
  m["seed"] = o.seed;
  return m;
}

/// The disease-free point ensembles measure distance to: x3 when xi > 0, the
/// mixed point when it exists with R0 < 1, otherwise x1.
DiseaseFreePoint ensemble_target(const ModelParams& p) {
  const auto dfes = solve_dfe(p);
  if (p.xi() > 0.0) return dfes.front();
  for (const auto& d : dfes)
    if (d.kind == DfeKind::Mixed && d.admissible && r0_det(p, d.s, d.s_star) < 1.0) return d;
  return dfes.front();
}

std::optional<double> worst_case_r0_sigma(const ModelParams& p) {
  if (p.xi() > 0.0 || p.nu() == 0.0) return r0_sigma_noncompliant(p);
  return r0_sigma_compliant(p);
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario sc = resolve(o);
  const fs::path dir = output_dir(o, sc, "analyze");
  Json report;
  report["scenario"] = sc.name;
  report["params"] = to_json(sc.params);
  report["notes"] = sc.notes;
  report["population_normalized"] = sc.params.population_normalized();
  report["dfes"] = Json::array();
  for (const auto& d : solve_dfe(sc.params)) report["dfes"].push_back(to_json(d));
  report["stability"] = Json::array();
  for (const auto& r : classify(sc.params)) report["stability"].push_back(to_json(r));
  Json th;
  th["r0_sigma_compliant"] = r0_sigma_compliant(sc.params);
  th["r0_sigma_noncompliant"] = r0_sigma_noncompliant(sc.params);
  th["r0_det_compliant"] = r0_det(sc.params, sc.params.capacity(), 0.0);
  th["noncompliance_threshold"] = to_json(noncompliance_threshold(sc.params));
  report["thresholds"] = th;

  int code = kOk;
  const DiseaseFreePoint x2 = mixed_dfe(sc.params);
  if (sc.params.xi() == 0.0 && x2.admissible) {
    try {
      const LyapunovCertificate c = certificate(sc.params);
      Json cj = to_json(c);
      if (sc.name == "fig5") {
        cj["reported_bound"] = kReportedFig5Bound;
        cj["ratio_to_reported"] = c.bound / kReportedFig5Bound;
      }
      report["certificate"] = cj;
      write_json(dir / "certificate.json", cj);
    } catch (const CertificateError& e) {
      report["certificate"] = Json{{"error", e.what()}};
      err << "certificate: " << e.what() << '\n';
      code = kCertificateFailure;
    }
  } else {
    report["certificate"] = nullptr;
  }
  write_json(dir / "report.json", report);
  Json m = manifest("analyze", sc, o);
  m["files"] = {"report.json"};
  if (report["certificate"].contains("bound")) m["files"].push_back("certificate.json");
  write_json(dir / "manifest.json", m);

  for (const auto& r : report["stability"])
    out << r["dfe"]["kind"].get<std::string>() << ": r0 = " << r["r0"].dump() << ", "
        << r["deterministic_verdict"].get<std::string>() << ", " << r["stochastic_verdict"].get<std::string>()
        << '\n';
  out << "wrote " << (dir / "report.json").string() << '\n';
  return code;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
  if (o.mode != "det" && o.mode != "sde") throw UsageError("--mode must be det or sde");
  const Scenario sc = resolve(o);
  const fs::path dir = output_dir(o, sc, "simulate");
  Json m = manifest("simulate", sc, o);
  m["mode"] = o.mode;

  const Trajectory det = euler_simulate(sc.params, sc.x0, sc.cfg);
  {
    std::ofstream f(dir / "det.csv");
    write_trajectory_csv(f, det);
  }
  m["files"] = {"det.csv"};
  m["det"] = {{"min_component_seen", det.min_component_seen},
              {"population_residual_max", det.population_residual_max},
              {"final", to_json(det.states.back())}};
  if (o.mode == "sde") {
    const Trajectory sde = sde_simulate(sc.params, sc.x0, sc.cfg, NoiseStream{o.seed, 0});
    std::ofstream f(dir / "sde.csv");
    write_trajectory_csv(f, sde);
    m["files"].push_back("sde.csv");
    Json sj = {{"min_component_seen", sde.min_component_seen},
               {"population_residual_max", sde.population_residual_max},
               {"clamped_mass", sde.clamped_mass},
               {"final", to_json(sde.states.back())}};
    const double t_burn = 10.0;
    if (sc.params.xi() == 0.0 && mixed_dfe(sc.params).admissible && sc.cfg.t_max > t_burn) {
      try {
        const LyapunovCertificate c = certificate(sc.params);
        const double avg = time_average_distance(sde, c.dfe.as_state(), t_burn);
        sj["time_average"] = {{"t_burn", t_burn}, {"value", avg}, {"bound", c.bound}, {"within", avg <= c.bound}};
      } catch (const CertificateError&) {
      }
    }
    m["sde"] = sj;
  }
  write_json(dir / "manifest.json", m);
  out << "wrote " << dir.string() << '\n';
  return kOk;
}

int cmd_ensemble(const Options& o, std::ostream& out, std::ostream&) {
  if (o.paths < 2) throw UsageError("--paths must be at least 2");
  const Scenario sc = resolve(o);
  const fs::path dir = output_dir(o, sc, "ensemble");
  const DiseaseFreePoint target = ensemble_target(sc.params);
  const EnsembleSummary s = ensemble_ms(sc.params, sc.x0, target.as_state(), sc.cfg, o.seed, o.paths);
  {
    std::ofstream f(dir / "ensemble.csv");
    write_ensemble_csv(f, s);
  }
  Json summary;
  summary["target"] = to_json(target);
  summary["n_paths"] = s.n_paths;
  summary["ms_distance_initial"] = s.ms_distance.front();
  summary["ms_distance_final"] = s.ms_distance.back();
  summary["ratio"] = s.ms_distance.back() / s.ms_distance.front();
  summary["min_component_seen"] = s.min_component_seen;
  summary["clamped_mass_max"] = s.clamped_mass_max;
  summary["population_residual_max"] = s.population_residual_max;
  try {
    summary["decay_fit"] = to_json(fit_decay(s, std::min(5.0, 0.1 * sc.cfg.t_max), sc.cfg.t_max));
  } catch (const std::invalid_argument&) {
    summary["decay_fit"] = nullptr;
  }
  if (const auto r0s = worst_case_r0_sigma(sc.params); r0s && *r0s < 1.0) {
    const double rate = 2.0 * (1.0 - *r0s) / (sc.params.gamma() + sc.params.delta());
    const double amp = 2.0 * std::max(sc.x0.I * sc.x0.I, sc.x0.I_star * sc.x0.I_star);
    double worst = 0.0;
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      const double env = amp * std::exp(-rate * s.times[k]);
      worst = std::max({worst, s.ms_I[k] / env, s.ms_Istar[k] / env});
    }
    summary["envelope"] = {{"r0_sigma", *r0s}, {"rate", rate}, {"amplitude", amp}, {"slack", 1.2},
                           {"max_ratio", worst}, {"holds", worst <= 1.2}};
  } else {
    summary["envelope"] = nullptr;
  }
  write_json(dir / "summary.json", summary);
  Json m = manifest("ensemble", sc, o);
  m["n_paths"] = o.paths;
  m["files"] = {"ensemble.csv", "summary.json"};
  write_json(dir / "manifest.json", m);
  out << "ms_distance(" << format_double(s.times.back()) << ")/ms_distance(0) = " << summary["ratio"].get<double>()
      << '\n'
      << "wrote " << dir.string() << '\n';
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream&) {
  VerifyOptions v;
  v.quick = o.quick;
  v.seed = o.seed;
  v.gamma_as_printed = o.gamma_as_printed;
  v.scheme = o.no_correction ? Scheme::EulerMaruyama : Scheme::Milstein;
  return print_verification(out, run_verification(v)) ? kOk : kVerifyFailed;
}

void scenario_flags(CLI::App* sub, Options& o) {
  sub->add_option("--preset", o.preset, "fig1..fig5");
  sub->add_option("--config", o.config, "JSON ModelParams or Scenario file");
  sub->add_option("--dt", o.dt, "step size");
  sub->add_option("--tmax", o.tmax, "final time");
  sub->add_option("--out", o.out, "output root")->capture_default_str();
  sub->add_option("--variant", o.variant, "noise variant reduced|full");
  sub->add_flag("--gamma-as-printed", o.gamma_as_printed, "use gamma = 1 in fig1..fig4");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compliance/noncompliance SIR model: analysis, simulation and checks", "ncsir"};
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "equilibria, thresholds, verdicts and certificate");
  scenario_flags(analyze, o);
  auto* simulate = app.add_subcommand("simulate", "one deterministic and one stochastic trajectory");
  scenario_flags(simulate, o);
  simulate->add_option("--mode", o.mode, "det|sde")->capture_default_str();
  simulate->add_option("--seed", o.seed)->capture_default_str();
  auto* ensemble = app.add_subcommand("ensemble", "mean-square statistics over seeded paths");
  scenario_flags(ensemble, o);
  ensemble->add_option("--seed", o.seed)->capture_default_str();
  ensemble->add_option("-n,--paths", o.paths, "number of paths (>= 2)")->capture_default_str();
  auto* verify = app.add_subcommand("verify", "property and stability checks");
  verify->add_flag("--quick", o.quick, "skip the ensemble checks");
  verify->add_option("--seed", o.seed)->capture_default_str();
  verify->add_flag("--gamma-as-printed", o.gamma_as_printed);
  for (auto* sub : {simulate, ensemble, verify}) sub->add_flag("--no-milstein-correction", o.no_correction)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << '\n';
    return kInvalidConfig;
  }

  try {
    if (*analyze) return cmd_analyze(o, out, err);
    if (*simulate) return cmd_simulate(o, out, err);
    if (*ensemble) return cmd_ensemble(o, out, err);
    return cmd_verify(o, out, err);
  } catch (const EnsembleError& e) {
    err << e.what() << '\n';
    return kEnsembleDivergence;
  } catch (const DivergenceError& e) {
    err << e.what() << '\n';
    return kDivergence;
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kInvalidConfig;
  }
}

}  // namespace ncsir::cli
