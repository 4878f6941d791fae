#include "ncsir/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>

namespace ncsir {

double squared_distance(const State& a, const State& b) noexcept {
  const Vec6 u = a.to_vec();
  const Vec6 v = b.to_vec();
  double acc = 0.0;
  for (std::size_t i = 0; i < kNumCompartments; ++i) acc += (u[i] - v[i]) * (u[i] - v[i]);
  return acc;
}

namespace {

struct PathMoments {
  std::vector<double> dist2, i2, istar2;
  double min_component = 0.0;
  double clamped = 0.0;
  double pop_residual = 0.0;
  bool failed = false;
};

PathMoments run_path(const ModelParams& p, const State& x0, const State& target, const IntegrationConfig& cfg,
                     std::uint64_t seed, std::size_t path) {
  PathMoments m;
  try {
    const Trajectory tr = sde_simulate(p, x0, cfg, NoiseStream{seed, path});
    const std::size_t n = tr.states.size();
    m.dist2.resize(n);
    m.i2.resize(n);
    m.istar2.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const State& x = tr.states[k];
      m.dist2[k] = squared_distance(x, target);
      m.i2[k] = x.I * x.I;
      m.istar2[k] = x.I_star * x.I_star;
    }
    m.min_component = tr.min_component_seen;
    m.clamped = tr.clamped_mass;
    m.pop_residual = tr.population_residual_max;
  } catch (const DivergenceError&) {
    m.failed = true;
  }
  return m;
}

std::vector<double> record_times(const IntegrationConfig& cfg) {
  const std::uint64_t n = cfg.step_count();
  std::vector<double> t;
  t.push_back(0.0);
  for (std::uint64_t k = cfg.record_stride; k <= n; k += cfg.record_stride) t.push_back(static_cast<double>(k) * cfg.dt);
  return t;
}

EnsembleSummary reduce(const std::vector<PathMoments>& paths, const IntegrationConfig& cfg) {
  const std::size_t failed =
      static_cast<std::size_t>(std::count_if(paths.begin(), paths.end(), [](const PathMoments& m) { return m.failed; }));
  if (failed > 0)
    throw EnsembleError(std::to_string(failed) + " of " + std::to_string(paths.size()) +
                            " paths diverged; ensemble estimate aborted",
                        failed, paths.size());

  EnsembleSummary s;
  s.times = record_times(cfg);
  s.n_paths = paths.size();
  const std::size_t nt = s.times.size();
  const double n = static_cast<double>(paths.size());
  s.ms_distance.assign(nt, 0.0);
  s.ms_I.assign(nt, 0.0);
  s.ms_Istar.assign(nt, 0.0);
  s.std_error.assign(nt, 0.0);
  s.min_component_seen = paths.front().min_component;

  for (const PathMoments& m : paths) {
    for (std::size_t k = 0; k < nt; ++k) {
      s.ms_distance[k] += m.dist2[k];
      s.ms_I[k] += m.i2[k];
      s.ms_Istar[k] += m.istar2[k];
    }
    s.min_component_seen = std::min(s.min_component_seen, m.min_component);
    s.clamped_mass_max = std::max(s.clamped_mass_max, m.clamped);
    s.population_residual_max = std::max(s.population_residual_max, m.pop_residual);
  }
  for (std::size_t k = 0; k < nt; ++k) {
    s.ms_distance[k] /= n;
    s.ms_I[k] /= n;
    s.ms_Istar[k] /= n;
  }
  // Second pass for the sample variance.
  for (const PathMoments& m : paths)
    for (std::size_t k = 0; k < nt; ++k) {
      const double d = m.dist2[k] - s.ms_distance[k];
      s.std_error[k] += d * d;
    }
  for (std::size_t k = 0; k < nt; ++k) s.std_error[k] = std::sqrt(s.std_error[k] / (n - 1.0) / n);
  return s;
}

void check_paths(std::size_t n_paths) {
  if (n_paths < 2) throw std::invalid_argument("ensemble needs at least 2 paths");
}

}  // namespace

EnsembleSummary ensemble_ms(const ModelParams& p, const State& x0, const State& target, const IntegrationConfig& cfg,
                            std::uint64_t seed, std::size_t n_paths) {
  check_paths(n_paths);
  cfg.step_count();
  std::vector<PathMoments> paths(n_paths);
  const auto n = static_cast<std::ptrdiff_t>(n_paths);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    paths[static_cast<std::size_t>(i)] = run_path(p, x0, target, cfg, seed, static_cast<std::size_t>(i));
  return reduce(paths, cfg);
}

EnsembleSummary ensemble_ms_serial(const ModelParams& p, const State& x0, const State& target,
                                   const IntegrationConfig& cfg, std::uint64_t seed, std::size_t n_paths) {
  check_paths(n_paths);
  cfg.step_count();
  std::vector<PathMoments> paths;
  paths.reserve(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) paths.push_back(run_path(p, x0, target, cfg, seed, i));
  return reduce(paths, cfg);
}

DecayFit fit_decay(const EnsembleSummary& summary, double t0, double t1) {
  std::vector<double> ts, ys;
  for (std::size_t k = 0; k < summary.times.size(); ++k) {
    const double t = summary.times[k];
    if (t >= t0 && t <= t1) {
      ts.push_back(t);
      ys.push_back(std::log(std::max(summary.ms_distance[k], 1e-300)));
    }
  }
  if (ts.size() < 5) throw std::invalid_argument("fit_decay: window holds fewer than 5 samples");

  const double n = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    my += ys[i];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    sty += (ts[i] - mt) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  DecayFit fit;
  fit.rate = sty / stt;
  fit.intercept = my - fit.rate * mt;
  fit.window_start = t0;
  fit.window_end = t1;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.rate * ts[i]);
    ss_res += r * r;
  }
  // A flat series is fitted exactly by a flat line.
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

double time_average_distance(const Trajectory& traj, const State& target, double t_burn) {
  if (traj.times.empty() || !(t_burn < traj.times.back()))
    throw std::invalid_argument("time_average_distance: t_burn must precede the final recorded time");
  double integral = 0.0;
  std::optional<std::pair<double, double>> prev;  // (t, |x - target|^2)
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    if (t < t_burn) continue;
    const double d2 = squared_distance(traj.states[k], target);
    if (prev) integral += 0.5 * (t - prev->first) * (d2 + prev->second);
    prev = {t, d2};
  }
  // Integrate over the recorded span; the first sample at or after t_burn starts it.
  const auto first = std::lower_bound(traj.times.begin(), traj.times.end(), t_burn);
  const double span = traj.times.back() - *first;
  return span > 0.0 ? integral / span : 0.0;
}

std::vector<double> ensemble_time_averages(const ModelParams& p, const State& x0, const State& target,
                                           const IntegrationConfig& cfg, std::uint64_t seed, std::size_t n_paths,
                                           double t_burn) {
  std::vector<double> out(n_paths, 0.0);
  std::vector<char> failed(n_paths, 0);
  const auto n = static_cast<std::ptrdiff_t>(n_paths);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = time_average_distance(sde_simulate(p, x0, cfg, NoiseStream{seed, idx}), target, t_burn);
    } catch (const DivergenceError&) {
      failed[idx] = 1;
    }
  }
  const auto n_failed = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  if (n_failed > 0)
    throw EnsembleError(std::to_string(n_failed) + " of " + std::to_string(n_paths) + " paths diverged", n_failed,
                        n_paths);
  return out;
}

void write_ensemble_csv(std::ostream& os, const EnsembleSummary& s) {
  os << "t,ms_distance,ms_I,ms_Istar,std_error\n";
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    os << format_double(s.times[k]) << ',' << format_double(s.ms_distance[k]) << ',' << format_double(s.ms_I[k]) << ','
       << format_double(s.ms_Istar[k]) << ',' << format_double(s.std_error[k]) << '\n';
  }
}

}  // namespace ncsir
