#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ncsir/integrate.hpp"
#include "ncsir/model.hpp"

namespace ncsir {

/// Per-time Monte Carlo moments over an ensemble of paths.
struct EnsembleSummary {
  std::vector<double> times;
  std::vector<double> ms_distance;  // E|X(t) - target|^2
  std::vector<double> ms_I;         // E[I^2]
  std::vector<double> ms_Istar;     // E[(I*)^2]
  std::vector<double> std_error;    // standard error of ms_distance
  std::size_t n_paths = 0;
  double min_component_seen = 0.0;  // over all paths
  double clamped_mass_max = 0.0;    // largest per-path clamped mass
  double population_residual_max = 0.0;
};

struct DecayFit {
  double rate = 0.0;  // slope of ln ms_distance against t
  double intercept = 0.0;
  double r_squared = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
};

/// Raised when any path of an ensemble diverges; the estimate is not formed.
class EnsembleError : public std::runtime_error {
 public:
  EnsembleError(const std::string& what, std::size_t failed, std::size_t total)
      : std::runtime_error(what), failed_paths(failed), n_paths(total) {}
  std::size_t failed_paths;
  std::size_t n_paths;
};

/// Squared Euclidean distance between two states.
double squared_distance(const State& a, const State& b) noexcept;

/// Paths run in parallel (OpenMP); path p uses NoiseStream{seed, p}. The
/// reduction runs in path order, so the result does not depend on the thread
/// count and matches ensemble_ms_serial bit for bit.
EnsembleSummary ensemble_ms(const ModelParams& p, const State& x0, const State& target, const IntegrationConfig& cfg,
                            std::uint64_t seed, std::size_t n_paths);

/// Single-threaded reference for ensemble_ms.
EnsembleSummary ensemble_ms_serial(const ModelParams& p, const State& x0, const State& target,
                                   const IntegrationConfig& cfg, std::uint64_t seed, std::size_t n_paths);

/// Least-squares line through (t, ln max(ms_distance, 1e-300)) on [t0, t1].
/// Throws std::invalid_argument with fewer than 5 samples in the window.
DecayFit fit_decay(const EnsembleSummary& summary, double t0, double t1);

/// Trapezoidal (1/(T - t_burn)) * integral_{t_burn}^{T} |X(t) - target|^2 dt over
/// the recorded samples with t >= t_burn.
double time_average_distance(const Trajectory& traj, const State& target, double t_burn);

/// time_average_distance for paths 0..n_paths-1 (parallel, ordered output).
std::vector<double> ensemble_time_averages(const ModelParams& p, const State& x0, const State& target,
                                           const IntegrationConfig& cfg, std::uint64_t seed, std::size_t n_paths,
                                           double t_burn);

void write_ensemble_csv(std::ostream& os, const EnsembleSummary& s);

}  // namespace ncsir
