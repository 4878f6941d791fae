#include "ncsir/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace ncsir {

using smalllin::Mat2;

std::string_view to_string(DfeKind k) {
  switch (k) {
    case DfeKind::FullyCompliant: return "FullyCompliant";
    case DfeKind::Mixed: return "Mixed";
    case DfeKind::Xi3: return "Xi3";
  }
  return "?";
}

std::string_view to_string(DeterministicVerdict v) {
  switch (v) {
    case DeterministicVerdict::LocallyAsymptoticallyStable: return "LocallyAsymptoticallyStable";
    case DeterministicVerdict::Unstable: return "Unstable";
    case DeterministicVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string_view to_string(StochasticVerdict v) {
  switch (v) {
    case StochasticVerdict::ExpMeanSquareStable: return "ExpMeanSquareStable";
    case StochasticVerdict::InfectionsDieOut: return "InfectionsDieOut";
    case StochasticVerdict::NoGuarantee: return "NoGuarantee";
  }
  return "?";
}

namespace {

// Relative slack on the simplex test so that DFEs computed in floating point
// (s + s* = b/delta up to rounding) are accepted.
constexpr double kSimplexSlack = 1e-12;

void require_admissible(const ModelParams& p, double s, double s_star) {
  const double cap = p.capacity();
  const double slack = kSimplexSlack * std::max(1.0, cap);
  if (!(s >= -slack && s_star >= -slack && s + s_star <= cap + slack))
    throw std::invalid_argument("(s, s*) = (" + std::to_string(s) + ", " + std::to_string(s_star) +
                                ") is outside the admissible simplex s, s* >= 0, s + s* <= b/delta");
}

// Closed form, no admissibility check (also used for finite differences on the boundary).
double r0_closed_form(const ModelParams& p, double s, double s_star) {
  const double a = p.alpha();
  const double gd = p.gamma() + p.delta();
  const double denom = gd + p.nu() + p.mu() * s_star;
  const double compliant = s * ((1.0 - a) * (1.0 - a) + a * (1.0 - a) * p.mu() * s_star / denom);
  const double noncompliant = s_star * (1.0 - a * p.nu() / denom);
  return p.beta() / gd * (compliant + noncompliant);
}

}  // namespace

std::vector<DiseaseFreePoint> solve_dfe(const ModelParams& p) {
  const double cap = p.capacity();
  const double ncap = p.noncompliance_capacity();
  if (p.xi() == 0.0) {
    const DiseaseFreePoint x1{cap, 0.0, DfeKind::FullyCompliant, true};
    const DiseaseFreePoint x2{ncap, cap - ncap, DfeKind::Mixed, cap > ncap};
    return {x1, x2};
  }
  // Smaller root of s^2 - (cap + ncap) s + cap (nu + (1-xi) delta)/mu = 0,
  // written as c / s_+ so it stays accurate (and exactly 0 when xi = 1, nu = 0).
  const double sum = cap + ncap;
  const double prod = cap * (p.nu() + (1.0 - p.xi()) * p.delta()) / p.mu();
  const double gap = cap - ncap;
  const double root = std::sqrt(gap * gap + 4.0 * p.xi() * p.b() / p.mu());
  const double s = 2.0 * prod / (sum + root);
  return {DiseaseFreePoint{s, cap - s, DfeKind::Xi3, true}};
}

DiseaseFreePoint mixed_dfe(const ModelParams& p) {
  const auto pts = solve_dfe(p);
  return p.xi() == 0.0 ? pts[1] : pts[0];
}

NextGenPair next_gen(const ModelParams& p, double s, double s_star) {
  require_admissible(p, s, s_star);
  const double a1 = 1.0 - p.alpha();
  const double beta = p.beta();
  const double gd = p.gamma() + p.delta();
  NextGenPair ng;
  ng.F = {beta * a1 * a1 * s, beta * a1 * s, beta * a1 * s_star, beta * s_star};
  ng.V = {gd + p.mu() * s_star, -p.nu(), -p.mu() * s_star, gd + p.nu()};
  return ng;
}

double r0_det(const ModelParams& p, double s, double s_star) {
  require_admissible(p, s, s_star);
  return r0_closed_form(p, s, s_star);
}

double r0_spectral(const ModelParams& p, double s, double s_star) {
  const NextGenPair ng = next_gen(p, s, s_star);
  return smalllin::spectral_radius(ng.F * smalllin::inverse(ng.V));
}

double r0_sigma_compliant(const ModelParams& p) {
  const double cap = p.capacity();
  const double a2 = (1.0 - p.alpha()) * (1.0 - p.alpha());
  const double sb2 = p.sigma_beta() * p.sigma_beta();
  return (p.beta() * cap * a2 + 0.5 * sb2 * cap * cap * a2 * a2) / (p.gamma() + p.delta());
}

double r0_sigma_noncompliant(const ModelParams& p) {
  const double cap = p.capacity();
  const double sb2 = p.sigma_beta() * p.sigma_beta();
  return (p.beta() * cap + 0.5 * sb2 * cap * cap) / (p.gamma() + p.delta());
}

ThresholdCheck noncompliance_threshold(const ModelParams& p) {
  const double cap = p.capacity();
  ThresholdCheck t;
  t.lhs = cap + p.sigma_mu() * p.sigma_mu() / (2.0 * p.mu()) * cap * cap;
  t.rhs = p.noncompliance_capacity();
  t.satisfied = t.lhs < t.rhs;
  return t;
}

std::array<double, 6> dv_eigenvalues(const ModelParams& p, double s, double s_star) {
  require_admissible(p, s, s_star);
  const double d = p.delta();
  const double g = p.gamma();
  const double nu = p.nu();
  const double mu = p.mu();
  return {g + d, g + d + nu + mu * s_star, d, d, d + nu + mu * s_star, d + nu + mu * (s_star - s)};
}

smalllin::Mat6 dv_matrix(const ModelParams& p, double s, double s_star) {
  const double a1 = 1.0 - p.alpha();
  const double b = p.beta();
  const double g = p.gamma();
  const double d = p.delta();
  const double mu = p.mu();
  const double nu = p.nu();
  return {{
      {g + d + mu * s_star, -nu, 0.0, 0.0, 0.0, 0.0},
      {-mu * s_star, g + d + nu, 0.0, 0.0, 0.0, 0.0},
      {b * a1 * a1 * s, (b * a1 + mu) * s, d + mu * s_star, 0.0, mu * s - nu, mu * s},
      {-g, 0.0, 0.0, d + mu * s_star, 0.0, -nu},
      {b * a1 * s_star, b * s_star - mu * s, -mu * s_star, 0.0, d + nu - mu * s, -mu * s},
      {0.0, -g, 0.0, -mu * s_star, 0.0, d + nu},
  }};
}

EigenResidual dv_eigen_residual(const ModelParams& p, double s, double s_star) {
  const auto dv = dv_matrix(p, s, s_star);
  EigenResidual r;
  r.tolerance = 1e-8 * std::pow(smalllin::row_sum_norm(dv), 6);
  for (double lambda : dv_eigenvalues(p, s, s_star))
    r.max_residual = std::max(r.max_residual, smalllin::char_residual_6(dv, lambda));
  return r;
}

namespace {

DeterministicVerdict deterministic_verdict(double a5_margin, double r0) {
  if (std::abs(a5_margin) <= kThresholdBand || a5_margin < 0.0) return DeterministicVerdict::Inconclusive;
  if (r0 < 1.0 - kThresholdBand) return DeterministicVerdict::LocallyAsymptoticallyStable;
  if (r0 > 1.0 + kThresholdBand) return DeterministicVerdict::Unstable;
  return DeterministicVerdict::Inconclusive;
}

StabilityReport report_for(const ModelParams& p, const DiseaseFreePoint& x) {
  StabilityReport rep;
  rep.dfe = x;
  rep.inputs_echo = p.values();

  const double d = p.delta();
  const double nu = p.nu();
  const double mu = p.mu();
  const double g = p.gamma();
  rep.eigenvalues_dv = {g + d, g + d + nu + mu * x.s_star, d, d, d + nu + mu * x.s_star,
                        d + nu + mu * (x.s_star - x.s)};
  const double a5_margin = p.noncompliance_capacity() - (x.s - x.s_star);
  rep.condition_a5 = a5_margin > 0.0;

  if (!x.admissible) return rep;

  const double r0 = r0_det(p, x.s, x.s_star);
  rep.r0 = r0;
  rep.deterministic_verdict = deterministic_verdict(a5_margin, r0);

  if (x.kind == DfeKind::FullyCompliant) {
    const double r0s = r0_sigma_compliant(p);
    const ThresholdCheck nt = noncompliance_threshold(p);
    rep.r0_sigma = r0s;
    if (nt.rhs - nt.lhs > kThresholdBand && 1.0 - r0s > kThresholdBand)
      rep.stochastic_verdict = StochasticVerdict::ExpMeanSquareStable;
  } else if (x.kind == DfeKind::Xi3 && p.xi() == 1.0 && p.nu() == 0.0) {
    const double r0s = r0_sigma_noncompliant(p);
    rep.r0_sigma = r0s;
    if (1.0 - r0s > kThresholdBand) {
      const double cap = p.capacity();
      const double spike = 0.5 * p.sigma_mu() * p.sigma_mu() * cap * cap;
      rep.stochastic_verdict = d - spike > kThresholdBand ? StochasticVerdict::ExpMeanSquareStable
                                                          : StochasticVerdict::InfectionsDieOut;
    }
  }
  return rep;
}

}  // namespace

std::vector<StabilityReport> classify(const ModelParams& p) {
  std::vector<StabilityReport> out;
  for (const auto& x : solve_dfe(p)) out.push_back(report_for(p, x));
  return out;
}

LyapunovCertificate certificate(const ModelParams& p) {
  if (p.nu() == 0.0)
    throw CertificateError("certificate requires nu > 0: the constant C diverges as nu -> 0");
  const double cap = p.capacity();
  if (p.xi() == 0.0 && !(cap > p.noncompliance_capacity() + kThresholdBand))
    throw CertificateError("certificate requires b/delta > (delta+nu)/mu when xi = 0 (no mixed DFE)");

  const DiseaseFreePoint x = mixed_dfe(p);
  const double r0 = r0_det(p, x.s, x.s_star);
  if (!(r0 < 1.0 - kThresholdBand))
    throw CertificateError("certificate requires R0(s,s*) < 1 at the mixed DFE; got " + std::to_string(r0));

  const NextGenPair ng = next_gen(p, x.s, x.s_star);
  LyapunovCertificate cert;
  cert.dfe = x;
  cert.M = ng.F - ng.V;
  try {
    cert.Q = smalllin::solve_lyapunov(cert.M);
  } catch (const smalllin::NotHurwitzError& e) {
    throw CertificateError(e.what());
  }
  cert.normQ = smalllin::spectral_norm(cert.Q);

  const double mu = p.mu();
  const double nu = p.nu();
  const double d = p.delta();
  const double g = p.gamma();
  const double beta = p.beta();
  const double nq = cert.normQ;
  const double cap2 = cap * cap;
  const double first = (2.0 * mu * x.s * x.s + 4.0 * d) / nu;
  const double second = 48.0 * nq * (2.0 * g * g + 2.0 * (g + 2.0 * d) * (g + 2.0 * d) + beta * beta * (2.0 * d / nu)) /
                        d * (1.0 + 4.0 * nq * cap2 * (beta + mu) / (3.0 * mu));
  cert.C = (first + second) * cap2 * cap2;
  cert.bound = cert.C * (p.sigma_beta() * p.sigma_beta() + p.sigma_mu() * p.sigma_mu());
  return cert;
}

bool r0_monotonicity_probe(const ModelParams& p, int n, unsigned long long seed) {
  const double cap = p.capacity();
  const double h = 1e-6 * cap;
  std::mt19937_64 gen(seed);
  auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };

  const double peak = r0_closed_form(p, 0.0, cap);
  const double tol = 1e-12 * std::max(1.0, peak);
  auto increasing_at = [&](double s, double ss) {
    const double base = r0_closed_form(p, s, ss);
    return r0_closed_form(p, s + h, ss) > base && r0_closed_form(p, s, ss + h) > base && base <= peak + tol;
  };

  for (int k = 0; k < n; ++k) {
    // Uniform on the simplex by folding the unit square.
    double u = unit(), v = unit();
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    if (!increasing_at(u * cap, v * cap)) return false;
  }

  constexpr int kBoundary = 1000;
  double best = -1.0;
  for (int k = 0; k <= kBoundary; ++k) {
    const double theta = cap * k / kBoundary;
    const double s = cap - theta;
    if (!increasing_at(s, theta)) return false;
    best = std::max(best, r0_closed_form(p, s, theta));
  }
  return std::abs(best - peak) <= tol;
}

}  // namespace ncsir
