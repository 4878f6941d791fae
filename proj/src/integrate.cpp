#include "ncsir/integrate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "ncsir/rng.hpp"

namespace ncsir {

std::uint64_t IntegrationConfig::step_count() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive and finite");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("t_max must be positive and finite");
  if (dt > t_max) throw std::invalid_argument("dt must not exceed t_max");
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  const double ratio = t_max / dt;
  if (ratio > 9.0e18) throw std::invalid_argument("t_max/dt does not fit a 64-bit step count");
  const double steps = std::round(ratio);
  if (std::abs(steps - ratio) > 1e-9 * ratio)
    throw std::invalid_argument("t_max must be an integer multiple of dt");
  return static_cast<std::uint64_t>(steps);
}

double total_population_exact(const ModelParams& p, double n0, double t) {
  const double cap = p.capacity();
  return cap + (n0 - cap) * std::exp(-p.delta() * t);
}

State euler_step(const State& x, const ModelParams& p, double dt) {
  const Vec6 f = drift(x, p);
  const Vec6 v = x.to_vec();
  Vec6 out;
  for (std::size_t i = 0; i < kNumCompartments; ++i) out[i] = v[i] + f[i] * dt;
  return State::from_vec(out);
}

State milstein_step(const State& x, const ModelParams& p, double dt, double dW, Scheme scheme) {
  return State::from_vec(milstein_update<kNumCompartments>(x.to_vec(), drift(x, p), diffusion(x, p),
                                                           diffusion_directional_derivative(x, p), dt, dW, scheme));
}

double wiener_increment(const NoiseStream& noise, std::uint64_t step, double dt) {
  return std::sqrt(dt) * rng::NormalStream(noise.seed, noise.path_index).normal(step);
}

namespace {

void check_initial(const ModelParams& p, const State& x0) {
  const Vec6 v = x0.to_vec();
  for (double c : v)
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("initial state components must be finite and >= 0");
  const double limit = std::max(1.0, p.capacity());
  if (x0.total() > limit * (1.0 + 1e-12))
    throw std::invalid_argument("initial total population exceeds max(1, b/delta)");
}

// Shared stepping loop. `step` maps (state, step index) to the next state.
template <class Step>
Trajectory run(const ModelParams& p, const State& x0, const IntegrationConfig& cfg, Step&& step) {
  check_initial(p, x0);
  const std::uint64_t n = cfg.step_count();
  const std::size_t stride = cfg.record_stride;
  const double n0 = x0.total();
  const double blowup = 10.0 * std::max(p.capacity(), n0);

  Trajectory traj;
  traj.times.reserve(n / stride + 1);
  traj.states.reserve(n / stride + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  traj.min_component_seen = x0.min_component();

  State x = x0;
  for (std::uint64_t k = 0; k < n; ++k) {
    x = step(x, k);
    const double t = static_cast<double>(k + 1) * cfg.dt;

    Vec6 v = x.to_vec();
    for (double c : v) {
      if (!std::isfinite(c) || c > blowup)
        throw DivergenceError("trajectory diverged at t = " + std::to_string(t), t);
    }
    traj.min_component_seen = std::min(traj.min_component_seen, x.min_component());
    if (cfg.positivity_policy == PositivityPolicy::ClampToZero) {
      bool clamped = false;
      for (double& c : v) {
        if (c < 0.0) {
          traj.clamped_mass += -c;
          c = 0.0;
          clamped = true;
        }
      }
      if (clamped) x = State::from_vec(v);
    }
    traj.population_residual_max =
        std::max(traj.population_residual_max, std::abs(x.total() - total_population_exact(p, n0, t)));

    if ((k + 1) % stride == 0) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
  }
  return traj;
}

}  // namespace

Trajectory euler_simulate(const ModelParams& p, const State& x0, const IntegrationConfig& cfg) {
  const double dt = cfg.dt;
  return run(p, x0, cfg, [&](const State& x, std::uint64_t) { return euler_step(x, p, dt); });
}

Trajectory sde_simulate(const ModelParams& p, const State& x0, const IntegrationConfig& cfg, const NoiseStream& noise) {
  const double dt = cfg.dt;
  const double sqrt_dt = std::sqrt(dt);
  const rng::NormalStream normals(noise.seed, noise.path_index);
  return run(p, x0, cfg, [&](const State& x, std::uint64_t k) {
    return milstein_step(x, p, dt, sqrt_dt * normals.normal(k), cfg.scheme);
  });
}

namespace {

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

StrongOrderResult strong_order_probe(const NoiseStream& noise, const StrongOrderConfig& cfg) {
  if (cfg.finest_level <= cfg.coarsest_level || cfg.coarsest_level < 0 || cfg.finest_level > 30 || cfg.n_paths == 0)
    throw std::invalid_argument("strong_order_probe: need 0 <= coarsest < finest <= 30 and n_paths > 0");

  const std::size_t n_levels = static_cast<std::size_t>(cfg.finest_level - cfg.coarsest_level + 1);
  const std::uint64_t n_fine = std::uint64_t{1} << cfg.finest_level;
  const double dt_fine = cfg.horizon / static_cast<double>(n_fine);
  const double a = cfg.drift;
  const double b = cfg.vol;

  std::vector<double> err_sum(n_levels, 0.0);
  std::vector<double> dW(n_fine);
  for (std::size_t path = 0; path < cfg.n_paths; ++path) {
    const NoiseStream stream{noise.seed, noise.path_index + path};
    double w_total = 0.0;
    for (std::uint64_t k = 0; k < n_fine; ++k) {
      dW[k] = wiener_increment(stream, k, dt_fine);
      w_total += dW[k];
    }
    const double exact = cfg.x0 * std::exp((a - 0.5 * b * b) * cfg.horizon + b * w_total);

    for (std::size_t lev = 0; lev < n_levels; ++lev) {
      const std::uint64_t group = std::uint64_t{1} << (cfg.finest_level - cfg.coarsest_level - static_cast<int>(lev));
      const double dt = dt_fine * static_cast<double>(group);
      std::array<double, 1> x{cfg.x0};
      for (std::uint64_t k = 0; k < n_fine; k += group) {
        double inc = 0.0;
        for (std::uint64_t j = 0; j < group; ++j) inc += dW[k + j];
        // g(x) = b x, so (Dg g)(x) = b^2 x.
        x = milstein_update<1>(x, {a * x[0]}, {b * x[0]}, {b * b * x[0]}, dt, inc, cfg.scheme);
      }
      err_sum[lev] += std::abs(x[0] - exact);
    }
  }

  StrongOrderResult res;
  std::vector<double> log_dt, log_err;
  for (std::size_t lev = 0; lev < n_levels; ++lev) {
    const double dt = std::ldexp(cfg.horizon, -(cfg.coarsest_level + static_cast<int>(lev)));
    const double e = err_sum[lev] / static_cast<double>(cfg.n_paths);
    res.dts.push_back(dt);
    res.errors.push_back(e);
    log_dt.push_back(std::log(dt));
    log_err.push_back(std::log(std::max(e, 1e-300)));
  }
  res.slope = least_squares_slope(log_dt, log_err);
  return res;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,S,I,R,S_star,I_star,R_star\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    os << format_double(traj.times[i]);
    for (double c : traj.states[i].to_vec()) os << ',' << format_double(c);
    os << '\n';
  }
}

}  // namespace ncsir
