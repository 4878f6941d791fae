#include "ncsir/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "ncsir/analysis.hpp"
#include "ncsir/equilibria.hpp"
#include "ncsir/model.hpp"
#include "ncsir/scenario.hpp"
#include "ncsir/smalllin.hpp"

namespace ncsir {

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53); }

  ModelParams params() {
    ParamValues v;
    v.b = uniform(0.1, 1.0);
    v.delta = uniform(0.1, 1.0);
    v.beta = uniform(0.1, 2.0);
    v.gamma = uniform(0.1, 2.0);
    v.alpha = uniform(0.0, 1.0);
    v.mu = uniform(0.1, 5.0);
    v.nu = uniform(0.0, 2.0);
    v.xi = uniform(0.0, 1.0);
    v.sigma_beta = uniform(0.0, 1.0);
    v.sigma_mu = uniform(0.0, 1.0);
    return ModelParams(v);
  }

  State state(double cap) {
    Vec6 x;
    for (double& c : x) c = uniform(0.0, cap / 6.0);
    return State::from_vec(x);
  }

  std::pair<double, double> simplex_point(double cap) {
    double u = uniform(0.0, 1.0), v = uniform(0.0, 1.0);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    return {u * cap, v * cap};
  }

 private:
  std::mt19937_64 gen_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CheckResult check(std::string name, bool ok, std::string measured, std::string criterion) {
  return {std::move(name), ok, std::move(measured), std::move(criterion)};
}

CheckResult drift_sum(Sampler& rng) {
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const ModelParams p = rng.params();
    const State x = rng.state(p.capacity());
    const Vec6 f = drift(x, p);
    double sum = 0.0, scale = p.b() + p.delta() * x.total();
    for (double c : f) {
      sum += c;
      scale += std::abs(c);
    }
    worst = std::max(worst, std::abs(sum - (p.b() - p.delta() * x.total())) / scale);
  }
  return check("drift sum = b - delta N", worst < 1e-14, "max rel err " + fmt(worst), "< 1e-14, 10^4 states");
}

CheckResult diffusion_sum(Sampler& rng) {
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const ModelParams p = rng.params();
    const Vec6 g = diffusion(rng.state(p.capacity()), p);
    double sum = 0.0, scale = 0.0;
    for (double c : g) {
      sum += c;
      scale += std::abs(c);
    }
    if (scale > 0.0) worst = std::max(worst, std::abs(sum) / scale);
  }
  return check("diffusion sum = 0", worst <= 8 * 0x1.0p-52, "max |sum|/sum|g| " + fmt(worst), "<= 8 eps, 10^4 states");
}

CheckResult directional_derivative(Sampler& rng) {
  const double h = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const ModelParams p = rng.params();
    const State x = rng.state(p.capacity());
    const Vec6 g = diffusion(x, p);
    Vec6 shifted = x.to_vec();
    for (std::size_t i = 0; i < 6; ++i) shifted[i] += h * g[i];
    const Vec6 g2 = diffusion(State::from_vec(shifted), p);
    const Vec6 dg = diffusion_directional_derivative(x, p);
    double err = 0.0;
    for (std::size_t i = 0; i < 6; ++i) err += std::pow((g2[i] - g[i]) / h - dg[i], 2);
    worst = std::max(worst, std::sqrt(err));
  }
  return check("(DG)G vs finite differences", worst < 1e-4, "max err " + fmt(worst), "< 1e-4, h = 1e-6, 1000 states");
}

CheckResult lyapunov_random(Sampler& rng) {
  double worst = 0.0;
  bool spd = true;
  for (int k = 0; k < 1000; ++k) {
    // Random real or complex-pair spectrum with real parts in [-5, -0.1], then a similarity.
    const double r1 = rng.uniform(-5.0, -0.1), r2 = rng.uniform(-5.0, -0.1), im = rng.uniform(0.0, 3.0);
    const bool complex_pair = rng.uniform(0.0, 1.0) < 0.5;
    const smalllin::Mat2 core = complex_pair ? smalllin::Mat2{r1, im, -im, r1} : smalllin::Mat2{r1, rng.uniform(-3, 3), 0.0, r2};
    smalllin::Mat2 t{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    if (std::abs(t.det()) < 0.1) t = t + smalllin::Mat2::identity();
    if (std::abs(t.det()) < 0.1) continue;
    const smalllin::Mat2 m = t * core * smalllin::inverse(t);
    const smalllin::Mat2 q = smalllin::solve_lyapunov(m);
    worst = std::max(worst, smalllin::lyapunov_residual(m, q) / std::max(1.0, smalllin::frobenius_norm(q)));
    spd = spd && q.a11 > 0.0 && q.det() > 0.0 && q.a12 == q.a21;
  }
  return check("Lyapunov residual / SPD", worst < 1e-10 && spd, "max rel residual " + fmt(worst),
               "< 1e-10, Q SPD, 1000 matrices");
}

CheckResult r0_agreement(Sampler& rng) {
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const ModelParams p = rng.params();
    const auto [s, ss] = rng.simplex_point(p.capacity());
    const double a = r0_det(p, s, ss);
    worst = std::max(worst, std::abs(a - r0_spectral(p, s, ss)) / std::max(1.0, a));
  }
  return check("R0 closed form vs rho(F V^-1)", worst < 1e-10, "max err " + fmt(worst), "< 1e-10, 1000 inputs");
}

CheckResult dv_eigen(Sampler& rng) {
  double worst = 0.0;
  bool ok = true;
  for (int k = 0; k < 1000; ++k) {
    const ModelParams p = rng.params();
    const auto [s, ss] = rng.simplex_point(p.capacity());
    const EigenResidual r = dv_eigen_residual(p, s, ss);
    ok = ok && r.ok();
    worst = std::max(worst, r.max_residual / r.tolerance);
  }
  return check("DV eigenvalue residuals", ok, "max residual/tol " + fmt(worst), "det(DV - l I) < 1e-8 ||DV||^6");
}

CheckResult monotonicity(Sampler& rng) {
  int passed = 0;
  for (int k = 0; k < 20; ++k)
    if (r0_monotonicity_probe(rng.params(), 1000, 100 + static_cast<unsigned long long>(k))) ++passed;
  return check("R0 monotone, max at (0, b/delta)", passed == 20, std::to_string(passed) + "/20", "all 20 parameter sets");
}

CheckResult dfe_checks(Sampler& rng) {
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const ModelParams p = rng.params();
    for (const auto& x : solve_dfe(p)) {
      if (!x.admissible) continue;
      for (double c : drift(x.as_state(), p)) worst = std::max(worst, std::abs(c));
      worst = std::max(worst, std::abs(x.s + x.s_star - p.capacity()));
    }
  }
  const Scenario f5 = preset("fig5");
  const DiseaseFreePoint x2 = mixed_dfe(f5.params);
  const double exact = std::max(std::abs(x2.s - 0.25), std::abs(x2.s_star - 0.05));
  return check("DFE drift residual, fig5 (1/4, 1/20)", worst < 1e-12 && exact < 1e-12,
               "drift " + fmt(worst) + ", fig5 " + fmt(exact), "< 1e-12");
}

CheckResult threshold_table(bool gamma_as_printed) {
  const ModelParams f1 = preset("fig1", gamma_as_printed).params;
  const ModelParams f2 = preset("fig2", gamma_as_printed).params;
  const ModelParams f3 = preset("fig3", gamma_as_printed).params;
  const ModelParams f4 = preset("fig4", gamma_as_printed).params;
  const ModelParams f5 = preset("fig5").params;
  const double a = r0_sigma_compliant(f1), b = r0_sigma_compliant(f2), c = r0_det(f2, f2.capacity(), 0.0);
  const double d = r0_sigma_noncompliant(f3), e = r0_sigma_noncompliant(f4);
  const double l1 = noncompliance_threshold(f1).lhs, l2 = noncompliance_threshold(f2).lhs;
  const double r5 = r0_det(f5, 0.25, 0.05);
  const bool ok = std::abs(a - 0.860) <= 5e-3 && std::abs(b - 1.708) <= 5e-3 && std::abs(c - 0.803) <= 5e-3 &&
                  std::abs(d - 0.971) <= 5e-3 && std::abs(e - 0.971) <= 5e-3 && l1 == 1.625 && l2 == 11.0 &&
                  std::abs(r5 - 0.0772) <= 5e-4;
  return check("published thresholds", ok,
               fmt(a) + " " + fmt(b) + " " + fmt(c) + " " + fmt(d) + " " + fmt(e) + " " + fmt(l1) + " " + fmt(l2) +
                   " " + fmt(r5),
               "0.860 1.708 0.803 0.971 0.971 1.625 11 0.0772");
}

CheckResult certificate_checks() {
  const Scenario f5 = preset("fig5");
  const LyapunovCertificate c = certificate(f5.params);
  bool ok = smalllin::lyapunov_residual(c.M, c.Q) < 1e-10 && c.Q.a11 > 0.0 && c.Q.det() > 0.0 && c.C > 0.0;
  auto refuses = [](ParamValues v) {
    try {
      certificate(ModelParams(v));
      return false;
    } catch (const CertificateError&) {
      return true;
    }
  };
  ParamValues v = f5.params.values();
  v.nu = 0.0;
  ok = ok && refuses(v);
  v = f5.params.values();
  v.beta = 20.0;  // pushes R0 at the mixed DFE above 1
  ok = ok && refuses(v);
  v = f5.params.values();
  v.sigma_beta = v.sigma_mu = 0.0;
  ok = ok && certificate(ModelParams(v)).bound == 0.0;
  return check("fig5 certificate", ok, "bound " + fmt(c.bound) + ", ||Q|| " + fmt(c.normQ),
               "residual < 1e-10, SPD, refuses nu=0 and R0>=1");
}

CheckResult strong_order(const VerifyOptions& opts) {
  StrongOrderConfig cfg;
  cfg.scheme = opts.scheme;
  const StrongOrderResult r = strong_order_probe(NoiseStream{opts.seed, 0}, cfg);
  return check("Milstein strong order", r.slope >= 0.8 && r.slope <= 1.2, "slope " + fmt(r.slope),
               "in [0.8, 1.2], GBM, 2000 paths");
}

CheckResult conservation(const VerifyOptions& opts) {
  double worst = 0.0;
  for (const auto& name : preset_names()) {
    Scenario sc = preset(name, opts.gamma_as_printed);
    sc.cfg.scheme = opts.scheme;
    worst = std::max(worst, euler_simulate(sc.params, sc.x0, sc.cfg).population_residual_max / sc.cfg.dt);
    for (std::uint64_t path = 0; path < 10; ++path)
      worst = std::max(worst, sde_simulate(sc.params, sc.x0, sc.cfg, {opts.seed, path}).population_residual_max /
                                  sc.cfg.dt);
  }
  return check("total population vs closed form", worst <= kPopulationK, "max dev/dt " + fmt(worst),
               "<= K = " + fmt(kPopulationK));
}

CheckResult compliant_decay(const VerifyOptions& opts) {
  Scenario sc = preset("fig1", opts.gamma_as_printed);
  sc.cfg.scheme = opts.scheme;
  const State target = solve_dfe(sc.params)[0].as_state();
  const EnsembleSummary s = ensemble_ms(sc.params, sc.x0, target, sc.cfg, opts.seed, 500);
  const double ratio = s.ms_distance.back() / s.ms_distance.front();
  const DecayFit fit = fit_decay(s, 5.0, 50.0);
  return check("fig1 mean-square decay", ratio < 1e-3 && fit.rate < 0.0,
               "ratio " + fmt(ratio) + ", rate " + fmt(fit.rate), "ms(50)/ms(0) < 1e-3, rate < 0");
}

CheckResult infection_envelope(const VerifyOptions& opts) {
  bool ok = true;
  std::string measured;
  for (const char* name : {"fig3", "fig4"}) {
    Scenario sc = preset(name, opts.gamma_as_printed);
    sc.cfg.scheme = opts.scheme;
    const double rate = 2.0 * (1.0 - r0_sigma_noncompliant(sc.params)) / (sc.params.gamma() + sc.params.delta());
    const double amp = 1.2 * 2.0 * std::max(sc.x0.I * sc.x0.I, sc.x0.I_star * sc.x0.I_star);
    const EnsembleSummary s = ensemble_ms(sc.params, sc.x0, solve_dfe(sc.params)[0].as_state(), sc.cfg, opts.seed, 500);
    double worst = 0.0;
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      const double env = amp * std::exp(-rate * s.times[k]);
      worst = std::max({worst, s.ms_I[k] / env, s.ms_Istar[k] / env});
    }
    ok = ok && worst <= 1.0;
    measured += std::string(name) + " " + fmt(worst) + " ";
  }
  return check("fig3/fig4 infection envelope", ok, "max ms/envelope " + measured, "<= 1 at all t");
}

CheckResult mixed_time_average(const VerifyOptions& opts) {
  Scenario sc = preset("fig5");
  sc.cfg.scheme = opts.scheme;
  const LyapunovCertificate c = certificate(sc.params);
  const auto avgs = ensemble_time_averages(sc.params, sc.x0, c.dfe.as_state(), sc.cfg, opts.seed, 200, 10.0);
  double mean = 0.0;
  std::size_t within = 0;
  for (double a : avgs) {
    mean += a;
    if (a <= c.bound) ++within;
  }
  mean /= static_cast<double>(avgs.size());
  const double frac = static_cast<double>(within) / static_cast<double>(avgs.size());
  return check("fig5 time average within bound", mean <= c.bound && frac >= 0.95,
               "mean " + fmt(mean) + ", frac " + fmt(frac) + ", bound " + fmt(c.bound), "mean <= bound, >= 95% paths");
}

CheckResult positivity(const VerifyOptions& opts) {
  double min_seen = std::numeric_limits<double>::infinity(), clamped = 0.0;
  for (const auto& name : preset_names()) {
    Scenario sc = preset(name, opts.gamma_as_printed);
    sc.cfg.scheme = opts.scheme;
    const State target = sc.x0;
    min_seen = std::min(min_seen, ensemble_ms(sc.params, sc.x0, target, sc.cfg, opts.seed, 500).min_component_seen);
    sc.cfg.positivity_policy = PositivityPolicy::ClampToZero;
    clamped = std::max(clamped, ensemble_ms(sc.params, sc.x0, target, sc.cfg, opts.seed, 500).clamped_mass_max);
  }
  return check("positivity monitor", min_seen > -1e-3 && clamped < 1e-3,
               "min " + fmt(min_seen) + ", clamped " + fmt(clamped), "min > -1e-3, clamped < 1e-3");
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
  Sampler rng(opts.seed);
  std::vector<CheckResult> out;
  auto guarded = [&](const std::string& name, const std::function<CheckResult()>& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back(check(name, false, std::string("error: ") + e.what(), "no exception"));
    }
  };
  guarded("drift sum", [&] { return drift_sum(rng); });
  guarded("diffusion sum", [&] { return diffusion_sum(rng); });
  guarded("(DG)G", [&] { return directional_derivative(rng); });
  guarded("Lyapunov", [&] { return lyapunov_random(rng); });
  guarded("R0 agreement", [&] { return r0_agreement(rng); });
  guarded("DV eigenvalues", [&] { return dv_eigen(rng); });
  guarded("R0 monotonicity", [&] { return monotonicity(rng); });
  guarded("DFE", [&] { return dfe_checks(rng); });
  guarded("thresholds", [&] { return threshold_table(opts.gamma_as_printed); });
  guarded("certificate", [&] { return certificate_checks(); });
  guarded("strong order", [&] { return strong_order(opts); });
  guarded("conservation", [&] { return conservation(opts); });
  if (!opts.quick) {
    guarded("fig1 decay", [&] { return compliant_decay(opts); });
    guarded("fig3/fig4 envelope", [&] { return infection_envelope(opts); });
    guarded("fig5 time average", [&] { return mixed_time_average(opts); });
    guarded("positivity", [&] { return positivity(opts); });
  }
  return out;
}

bool print_verification(std::ostream& os, const std::vector<CheckResult>& results) {
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    char line[512];
    std::snprintf(line, sizeof line, "%-4s  %-38s  %-48s  [%s]\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                  r.measured.c_str(), r.criterion.c_str());
    os << line;
  }
  os << (all ? "all checks passed\n" : "some checks FAILED\n");
  return all;
}

}  // namespace ncsir
