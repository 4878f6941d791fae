#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace ncsir {

/// Fixed compartment order used by every vector, file and CSV column.
enum Compartment : std::size_t { kS = 0, kI, kR, kSStar, kIStar, kRStar, kNumCompartments };

using Vec6 = std::array<double, kNumCompartments>;

/// Which product terms multiply the Wiener increment.
///
/// Reduced uses (1-alpha)^2 S I, S* I*, S S*, I I*, R R*; every noise term is
/// proportional to the compartment it perturbs, which is what the positivity
/// result relies on. Full uses the actively mixing infectious density and the
/// total noncompliant density instead: (1-alpha) S I_M, S* I_M, S N*, I N*, R N*.
enum class NoiseVariant { Reduced, Full };

std::string_view to_string(NoiseVariant v);
NoiseVariant noise_variant_from_string(std::string_view s);

/// Raw parameter values. Plain aggregate; validation happens in ModelParams.
struct ParamValues {
  double b = 0.0;           // birth rate
  double delta = 0.0;       // death rate
  double beta = 0.0;        // disease infectivity
  double gamma = 0.0;       // disease recovery rate
  double alpha = 0.0;       // NPI infectivity reduction, [0,1]
  double mu = 0.0;          // noncompliance infectivity
  double nu = 0.0;          // recovery from noncompliance
  double xi = 0.0;          // noncompliant fraction of inflow, [0,1]
  double sigma_beta = 0.0;  // disease-noise intensity
  double sigma_mu = 0.0;    // noncompliance-noise intensity
  NoiseVariant variant = NoiseVariant::Reduced;

  bool operator==(const ParamValues&) const = default;
};

/// Validated, immutable model parameters.
///
/// Construction throws std::invalid_argument on any violated range. The
/// drift and diffusion evaluators assume a validated object and do no checks.
class ModelParams {
 public:
  explicit ModelParams(const ParamValues& v);

  const ParamValues& values() const noexcept { return v_; }

  double b() const noexcept { return v_.b; }
  double delta() const noexcept { return v_.delta; }
  double beta() const noexcept { return v_.beta; }
  double gamma() const noexcept { return v_.gamma; }
  double alpha() const noexcept { return v_.alpha; }
  double mu() const noexcept { return v_.mu; }
  double nu() const noexcept { return v_.nu; }
  double xi() const noexcept { return v_.xi; }
  double sigma_beta() const noexcept { return v_.sigma_beta; }
  double sigma_mu() const noexcept { return v_.sigma_mu; }
  NoiseVariant variant() const noexcept { return v_.variant; }

  /// Steady-state total population b/delta.
  double capacity() const noexcept { return v_.b / v_.delta; }

  /// Threshold (delta+nu)/mu separating the one- and two-DFE regimes when xi = 0.
  double noncompliance_capacity() const noexcept { return (v_.delta + v_.nu) / v_.mu; }

  /// True when b/delta >= 1, i.e. a population normalized to N(0)=1 stays below b/delta.
  bool population_normalized() const noexcept { return capacity() >= 1.0; }

  bool noiseless() const noexcept { return v_.sigma_beta == 0.0 && v_.sigma_mu == 0.0; }

  bool operator==(const ModelParams& o) const { return v_ == o.v_; }

 private:
  ParamValues v_;
};

/// Six compartment densities at one instant, in model order.
struct State {
  double S = 0.0;
  double I = 0.0;
  double R = 0.0;
  double S_star = 0.0;
  double I_star = 0.0;
  double R_star = 0.0;

  Vec6 to_vec() const noexcept { return {S, I, R, S_star, I_star, R_star}; }
  static State from_vec(const Vec6& x) noexcept { return {x[0], x[1], x[2], x[3], x[4], x[5]}; }

  double total() const noexcept { return S + I + R + S_star + I_star + R_star; }
  double min_component() const noexcept;

  bool operator==(const State&) const = default;
};

struct DerivedQuantities {
  double I_M = 0.0;     // (1-alpha) I + I*
  double N_star = 0.0;  // S* + I* + R*
  double N_total = 0.0;
};

DerivedQuantities derived(const State& x, const ModelParams& p) noexcept;

/// Deterministic right-hand side, compartment order.
Vec6 drift(const State& x, const ModelParams& p) noexcept;

/// Coefficients of the scalar Wiener increment, compartment order.
Vec6 diffusion(const State& x, const ModelParams& p) noexcept;

/// (DG)·G: derivative of the diffusion field at x along diffusion(x).
/// This is the Milstein correction direction for a single driving noise.
Vec6 diffusion_directional_derivative(const State& x, const ModelParams& p) noexcept;

}  // namespace ncsir
