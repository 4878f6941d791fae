#include "ncsir/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ncsir {

std::string_view to_string(NoiseVariant v) {
  return v == NoiseVariant::Full ? "full" : "reduced";
}

NoiseVariant noise_variant_from_string(std::string_view s) {
  if (s == "reduced") return NoiseVariant::Reduced;
  if (s == "full") return NoiseVariant::Full;
  throw std::invalid_argument("unknown noise variant '" + std::string(s) + "' (expected reduced|full)");
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("invalid model parameters: ") + what);
}

}  // namespace

ModelParams::ModelParams(const ParamValues& v) : v_(v) {
  const double all[] = {v.b, v.delta, v.beta, v.gamma, v.alpha, v.mu, v.nu, v.xi, v.sigma_beta, v.sigma_mu};
  for (double x : all) require(std::isfinite(x), "all parameters must be finite");
  require(v.b > 0.0, "b must be > 0");
  require(v.delta > 0.0, "delta must be > 0");
  require(v.beta > 0.0, "beta must be > 0");
  require(v.gamma > 0.0, "gamma must be > 0");
  require(v.mu > 0.0, "mu must be > 0");
  require(v.nu >= 0.0, "nu must be >= 0");
  require(v.alpha >= 0.0 && v.alpha <= 1.0, "alpha must lie in [0,1]");
  require(v.xi >= 0.0 && v.xi <= 1.0, "xi must lie in [0,1]");
  require(v.sigma_beta >= 0.0, "sigma_beta must be >= 0");
  require(v.sigma_mu >= 0.0, "sigma_mu must be >= 0");
}

double State::min_component() const noexcept {
  return std::min({S, I, R, S_star, I_star, R_star});
}

DerivedQuantities derived(const State& x, const ModelParams& p) noexcept {
  DerivedQuantities d;
  d.I_M = (1.0 - p.alpha()) * x.I + x.I_star;
  d.N_star = x.S_star + x.I_star + x.R_star;
  d.N_total = x.S + x.I + x.R + x.S_star + x.I_star + x.R_star;
  return d;
}

Vec6 drift(const State& x, const ModelParams& p) noexcept {
  const double a1 = 1.0 - p.alpha();
  const double im = a1 * x.I + x.I_star;
  const double nstar = x.S_star + x.I_star + x.R_star;

  const double infect = p.beta() * a1 * x.S * im;       // S  -> I
  const double infect_star = p.beta() * x.S_star * im;  // S* -> I*
  const double conv_s = p.mu() * x.S * nstar;           // S  -> S*
  const double conv_i = p.mu() * x.I * nstar;           // I  -> I*
  const double conv_r = p.mu() * x.R * nstar;           // R  -> R*

  Vec6 f;
  f[kS] = (1.0 - p.xi()) * p.b() - infect - conv_s + p.nu() * x.S_star - p.delta() * x.S;
  f[kI] = infect - p.gamma() * x.I - conv_i + p.nu() * x.I_star - p.delta() * x.I;
  f[kR] = p.gamma() * x.I - conv_r + p.nu() * x.R_star - p.delta() * x.R;
  f[kSStar] = p.xi() * p.b() - infect_star + conv_s - p.nu() * x.S_star - p.delta() * x.S_star;
  f[kIStar] = infect_star - p.gamma() * x.I_star + conv_i - p.nu() * x.I_star - p.delta() * x.I_star;
  f[kRStar] = p.gamma() * x.I_star + conv_r - p.nu() * x.R_star - p.delta() * x.R_star;
  return f;
}

namespace {

// The noise moves mass along five channels; each diffusion component is a
// signed sum of these, so the components always cancel in total.
struct NoiseFluxes {
  double s_to_i;          // sigma_beta channel, compliant
  double s_to_sstar;      // sigma_mu channel
  double i_to_istar;      // sigma_mu channel
  double r_to_rstar;      // sigma_mu channel
  double sstar_to_istar;  // sigma_beta channel, noncompliant
};

Vec6 assemble(const NoiseFluxes& q) noexcept {
  return {-q.s_to_i - q.s_to_sstar,
          q.s_to_i - q.i_to_istar,
          -q.r_to_rstar,
          -q.sstar_to_istar + q.s_to_sstar,
          q.sstar_to_istar + q.i_to_istar,
          q.r_to_rstar};
}

NoiseFluxes fluxes(const State& x, const ModelParams& p) noexcept {
  const double a1 = 1.0 - p.alpha();
  const double sb = p.sigma_beta();
  const double sm = p.sigma_mu();
  if (p.variant() == NoiseVariant::Reduced) {
    return {sb * a1 * a1 * x.S * x.I, sm * x.S * x.S_star, sm * x.I * x.I_star, sm * x.R * x.R_star,
            sb * x.S_star * x.I_star};
  }
  const double im = a1 * x.I + x.I_star;
  const double nstar = x.S_star + x.I_star + x.R_star;
  return {sb * a1 * x.S * im, sm * x.S * nstar, sm * x.I * nstar, sm * x.R * nstar, sb * x.S_star * im};
}

// Product rule on each bilinear flux, evaluated in direction g.
NoiseFluxes flux_derivative(const State& x, const Vec6& g, const ModelParams& p) noexcept {
  const double a1 = 1.0 - p.alpha();
  const double sb = p.sigma_beta();
  const double sm = p.sigma_mu();
  if (p.variant() == NoiseVariant::Reduced) {
    return {sb * a1 * a1 * (g[kS] * x.I + x.S * g[kI]),
            sm * (g[kS] * x.S_star + x.S * g[kSStar]),
            sm * (g[kI] * x.I_star + x.I * g[kIStar]),
            sm * (g[kR] * x.R_star + x.R * g[kRStar]),
            sb * (g[kSStar] * x.I_star + x.S_star * g[kIStar])};
  }
  const double im = a1 * x.I + x.I_star;
  const double nstar = x.S_star + x.I_star + x.R_star;
  const double dim = a1 * g[kI] + g[kIStar];
  const double dnstar = g[kSStar] + g[kIStar] + g[kRStar];
  return {sb * a1 * (g[kS] * im + x.S * dim),
          sm * (g[kS] * nstar + x.S * dnstar),
          sm * (g[kI] * nstar + x.I * dnstar),
          sm * (g[kR] * nstar + x.R * dnstar),
          sb * (g[kSStar] * im + x.S_star * dim)};
}

}  // namespace

Vec6 diffusion(const State& x, const ModelParams& p) noexcept {
  return assemble(fluxes(x, p));
}

Vec6 diffusion_directional_derivative(const State& x, const ModelParams& p) noexcept {
  return assemble(flux_derivative(x, diffusion(x, p), p));
}

}  // namespace ncsir
