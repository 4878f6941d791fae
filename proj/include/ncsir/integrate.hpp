#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncsir/model.hpp"

namespace ncsir {

enum class PositivityPolicy { Monitor, ClampToZero };

/// EulerMaruyama drops the (dW^2 - dt) correction; kept for the strong-order
/// comparison and for demonstrating that the probe detects its absence.
enum class Scheme { Milstein, EulerMaruyama };

struct IntegrationConfig {
  double dt = 0.05;
  double t_max = 50.0;
  std::size_t record_stride = 1;
  PositivityPolicy positivity_policy = PositivityPolicy::Monitor;
  Scheme scheme = Scheme::Milstein;

  /// Throws std::invalid_argument unless dt > 0, dt <= t_max, stride >= 1 and
  /// t_max is an integer multiple of dt (to 1e-9 relative).
  std::uint64_t step_count() const;
};

struct NoiseStream {
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  double min_component_seen = 0.0;       // before any clamping
  double population_residual_max = 0.0;  // max |N(t_k) - exact N(t_k)| over all steps
  double clamped_mass = 0.0;             // ClampToZero only
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
  double time;
};

/// Exact total population: b/delta + (N0 - b/delta) e^{-delta t}.
double total_population_exact(const ModelParams& p, double n0, double t);

/// Generic scalar-noise update x + f dt + g dW + (1/2) (Dg g) (dW^2 - dt).
template <std::size_t N>
std::array<double, N> milstein_update(const std::array<double, N>& x, const std::array<double, N>& f,
                                      const std::array<double, N>& g, const std::array<double, N>& dg_g,
                                      double dt, double dW, Scheme scheme) {
  std::array<double, N> out;
  const double ito = dW * dW - dt;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = x[i] + f[i] * dt + g[i] * dW;
    if (scheme == Scheme::Milstein) out[i] += 0.5 * dg_g[i] * ito;
  }
  return out;
}

State euler_step(const State& x, const ModelParams& p, double dt);
State milstein_step(const State& x, const ModelParams& p, double dt, double dW, Scheme scheme = Scheme::Milstein);

/// Explicit Euler on the deterministic system. Throws DivergenceError.
Trajectory euler_simulate(const ModelParams& p, const State& x0, const IntegrationConfig& cfg);

/// Milstein on the stochastic system with dW_k = sqrt(dt) Z(seed, path, k).
Trajectory sde_simulate(const ModelParams& p, const State& x0, const IntegrationConfig& cfg, const NoiseStream& noise);

/// Brownian increment k of a path: sqrt(dt) times the keyed standard normal.
double wiener_increment(const NoiseStream& noise, std::uint64_t step, double dt);

struct StrongOrderConfig {
  double drift = 1.5;
  double vol = 1.0;
  double x0 = 1.0;
  double horizon = 1.0;
  int coarsest_level = 4;  // dt = 2^-4
  int finest_level = 9;    // dt = 2^-9
  std::size_t n_paths = 2000;
  Scheme scheme = Scheme::Milstein;
};

struct StrongOrderResult {
  std::vector<double> dts;
  std::vector<double> errors;  // E|X_N - X(T)| per dt
  double slope = 0.0;          // least squares of log(error) vs log(dt)
};

/// Strong convergence order of the shared update kernel on geometric Brownian
/// motion, whose exact solution is x0 exp((a - b^2/2) T + b W_T). All levels
/// reuse the finest-level increments.
StrongOrderResult strong_order_probe(const NoiseStream& noise, const StrongOrderConfig& cfg = {});

/// CSV with header t,S,I,R,S_star,I_star,R_star; shortest round-trip decimals.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Shortest decimal representation that round-trips.
std::string format_double(double v);

}  // namespace ncsir
