#include <doctest.h>

#include <cmath>

#include "ncsir/equilibria.hpp"
#include "ncsir/model.hpp"
#include "ncsir/scenario.hpp"
#include "support.hpp"

using namespace ncsir;

namespace {

// rho(F V^-1) by writing out both 2x2 products and the quadratic formula.
double r0_by_hand(const ParamValues& v, double s, double ss) {
  const double a1 = 1 - v.alpha;
  const double f11 = v.beta * a1 * a1 * s, f12 = v.beta * a1 * s, f21 = v.beta * a1 * ss, f22 = v.beta * ss;
  const double v11 = v.gamma + v.delta + v.mu * ss, v12 = -v.nu, v21 = -v.mu * ss, v22 = v.gamma + v.delta + v.nu;
  const double det = v11 * v22 - v12 * v21;
  const double i11 = v22 / det, i12 = -v12 / det, i21 = -v21 / det, i22 = v11 / det;
  const double k11 = f11 * i11 + f12 * i21, k12 = f11 * i12 + f12 * i22;
  const double k21 = f21 * i11 + f22 * i21, k22 = f21 * i12 + f22 * i22;
  const double tr = k11 + k22, dt = k11 * k22 - k12 * k21;
  return 0.5 * (tr + std::sqrt(tr * tr - 4 * dt));
}

// S-equation at a disease-free point, solved by bisection on [0, b/delta].
double dfe_s_by_bisection(const ParamValues& v) {
  const double cap = v.b / v.delta;
  auto f = [&](double s) { return (1 - v.xi) * v.b - v.mu * s * (cap - s) + v.nu * (cap - s) - v.delta * s; };
  double lo = 0, hi = cap;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ParamValues preset_values(const char* name) { return preset(name).params.values(); }

}  // namespace

TEST_CASE("fig5 disease-free points") {
  const ModelParams p{testing::fig5_values()};
  const auto dfes = solve_dfe(p);
  REQUIRE(dfes.size() == 2);
  CHECK(dfes[0].kind == DfeKind::FullyCompliant);
  CHECK(dfes[0].s == doctest::Approx(0.3));
  CHECK(dfes[0].s_star == 0.0);
  CHECK(dfes[1].kind == DfeKind::Mixed);
  CHECK(dfes[1].admissible);
  CHECK(std::abs(dfes[1].s - 0.25) < 1e-12);
  CHECK(std::abs(dfes[1].s_star - 0.05) < 1e-12);
  CHECK(mixed_dfe(p).s == dfes[1].s);
}

TEST_CASE("mixed point flagged inadmissible below the noncompliance capacity") {
  const auto dfes = solve_dfe(preset("fig1").params);  // b/delta = 1 < (delta+nu)/mu = 2
  REQUIRE(dfes.size() == 2);
  CHECK_FALSE(dfes[1].admissible);
}

TEST_CASE("xi > 0 point matches bisection and zeroes the drift") {
  testing::Sampler rng(21);
  for (int k = 0; k < 500; ++k) {
    ParamValues v = rng.values();
    v.xi = rng.uniform(0.01, 1.0);
    const ModelParams p{v};
    const auto dfes = solve_dfe(p);
    REQUIRE(dfes.size() == 1);
    CHECK(dfes[0].kind == DfeKind::Xi3);
    REQUIRE(dfes[0].s == doctest::Approx(dfe_s_by_bisection(v)).epsilon(1e-10).scale(p.capacity()));
    REQUIRE(dfes[0].s + dfes[0].s_star == doctest::Approx(p.capacity()));
    for (double c : drift(dfes[0].as_state(), p)) REQUIRE(std::abs(c) < 1e-12);
  }
}

TEST_CASE("worst case xi = 1, nu = 0 sits at (0, b/delta)") {
  const auto dfes = solve_dfe(preset("fig3").params);
  REQUIRE(dfes.size() == 1);
  CHECK(dfes[0].s == doctest::Approx(0).scale(1));
  CHECK(dfes[0].s_star == doctest::Approx(1.0));
}

TEST_CASE("R0 closed form against an independent product") {
  testing::Sampler rng(22);
  for (int k = 0; k < 1000; ++k) {
    const ParamValues v = rng.values();
    const ModelParams p{v};
    double s = rng.uniform(0, 1), ss = rng.uniform(0, 1);
    if (s + ss > 1) {
      s = 1 - s;
      ss = 1 - ss;
    }
    s *= p.capacity();
    ss *= p.capacity();
    REQUIRE(r0_det(p, s, ss) == doctest::Approx(r0_by_hand(v, s, ss)).epsilon(1e-10));
    REQUIRE(r0_spectral(p, s, ss) == doctest::Approx(r0_by_hand(v, s, ss)).epsilon(1e-10));
  }
}

TEST_CASE("next_gen rejects points outside the simplex") {
  const ModelParams p{testing::fig5_values()};
  CHECK_THROWS_AS(next_gen(p, -0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(next_gen(p, 0.3, 0.1), std::invalid_argument);
  const NextGenPair ng = next_gen(p, 0.25, 0.05);
  CHECK(ng.F.a11 == doctest::Approx(0.5 * 0.5625 * 0.25));
  CHECK(ng.V.a12 == doctest::Approx(-1.0));
  CHECK(ng.V.a21 == doctest::Approx(-0.4));
}

TEST_CASE("published thresholds") {
  CHECK(std::abs(r0_det(preset("fig5").params, 0.25, 0.05) - 0.0772) <= 5e-4);
  CHECK(std::abs(r0_sigma_compliant(preset("fig1").params) - 0.860) <= 5e-3);
  CHECK(std::abs(r0_sigma_compliant(preset("fig2").params) - 1.708) <= 5e-3);
  CHECK(std::abs(r0_det(preset("fig2").params, 1.0, 0.0) - 0.803) <= 5e-3);
  CHECK(std::abs(r0_sigma_noncompliant(preset("fig3").params) - 0.971) <= 5e-3);
  CHECK(std::abs(r0_sigma_noncompliant(preset("fig4").params) - 0.971) <= 5e-3);
  CHECK(noncompliance_threshold(preset("fig1").params).lhs == 1.625);
  CHECK(noncompliance_threshold(preset("fig2").params).lhs == 11.0);
  CHECK(noncompliance_threshold(preset("fig1").params).rhs == doctest::Approx(2.0));
}

TEST_CASE("printed gamma does not reproduce the thresholds") {
  CHECK(std::abs(r0_sigma_compliant(preset("fig1", true).params) - 0.860) > 0.1);
}

TEST_CASE("stochastic thresholds reduce to R0 without noise") {
  testing::Sampler rng(23);
  for (int k = 0; k < 200; ++k) {
    ParamValues v = rng.values();
    v.sigma_beta = v.sigma_mu = 0;
    CHECK(r0_sigma_compliant(ModelParams{v}) == doctest::Approx(r0_det(ModelParams{v}, v.b / v.delta, 0)));
    // the noncompliant threshold ignores the return flow nu
    v.nu = 0;
    CHECK(r0_sigma_noncompliant(ModelParams{v}) == doctest::Approx(r0_det(ModelParams{v}, 0, v.b / v.delta)));
  }
}

TEST_CASE("DV eigenvalues") {
  const ModelParams p{testing::fig5_values()};
  const auto ev = dv_eigenvalues(p, 0.25, 0.05);
  const double expected[] = {1.25, 2.65, 1.0, 1.0, 2.4, 0.4};
  for (int i = 0; i < 6; ++i) CHECK(ev[i] == doctest::Approx(expected[i]));
  CHECK(dv_eigen_residual(p, 0.25, 0.05).ok());

  testing::Sampler rng(24);
  for (int k = 0; k < 1000; ++k) {
    const ModelParams q{rng.values()};
    const double s = rng.uniform(0, 0.5) * q.capacity(), ss = rng.uniform(0, 0.5) * q.capacity();
    REQUIRE(dv_eigen_residual(q, s, ss).ok());
  }
  // a wrong eigenvalue must not pass
  const auto dv = dv_matrix(p, 0.25, 0.05);
  CHECK(smalllin::char_residual_6(dv, 1.7) > dv_eigen_residual(p, 0.25, 0.05).tolerance);
}

TEST_CASE("classification of the presets") {
  SUBCASE("fig1: stochastic conditions met at x1") {
    const auto r = classify(preset("fig1").params);
    CHECK(r[0].deterministic_verdict == DeterministicVerdict::LocallyAsymptoticallyStable);
    CHECK(r[0].stochastic_verdict == StochasticVerdict::ExpMeanSquareStable);
    CHECK_FALSE(r[1].r0.has_value());
  }
  SUBCASE("fig2: deterministic only") {
    const auto r = classify(preset("fig2").params);
    CHECK(r[0].deterministic_verdict == DeterministicVerdict::LocallyAsymptoticallyStable);
    CHECK(r[0].stochastic_verdict == StochasticVerdict::NoGuarantee);
  }
  SUBCASE("fig3 and fig4") {
    CHECK(classify(preset("fig3").params)[0].stochastic_verdict == StochasticVerdict::ExpMeanSquareStable);
    CHECK(classify(preset("fig4").params)[0].stochastic_verdict == StochasticVerdict::InfectionsDieOut);
  }
  SUBCASE("fig5 mixed point") {
    const auto r = classify(preset("fig5").params);
    REQUIRE(r[1].r0.has_value());
    CHECK(*r[1].r0 == doctest::Approx(0.077193).epsilon(1e-5));
    CHECK(r[1].deterministic_verdict == DeterministicVerdict::LocallyAsymptoticallyStable);
  }
}

TEST_CASE("verdicts coincide without noise") {
  for (const char* name : {"fig1", "fig2", "fig3", "fig4"}) {
    ParamValues v = preset_values(name);
    v.sigma_beta = v.sigma_mu = 0;
    const auto r = classify(ModelParams{v});
    const bool det = r[0].deterministic_verdict == DeterministicVerdict::LocallyAsymptoticallyStable;
    const bool sto = r[0].stochastic_verdict == StochasticVerdict::ExpMeanSquareStable;
    CHECK_MESSAGE(det == sto, name);
  }
}

TEST_CASE("near-threshold inputs give no verdict") {
  ParamValues v = preset_values("fig1");
  // r0 at x1 = beta (1-alpha)^2 / (gamma+delta) = 1 exactly
  v.beta = (v.gamma + v.delta) / 0.5625;
  v.sigma_beta = v.sigma_mu = 0;
  const auto r = classify(ModelParams{v});
  CHECK(r[0].deterministic_verdict == DeterministicVerdict::Inconclusive);
  CHECK(r[0].stochastic_verdict == StochasticVerdict::NoGuarantee);
}

TEST_CASE("fig5 certificate") {
  const ModelParams p{testing::fig5_values()};
  const LyapunovCertificate c = certificate(p);
  CHECK(c.M.a11 == doctest::Approx(-1.5796875));
  CHECK(c.M.a12 == doctest::Approx(1.09375));
  CHECK(c.M.a21 == doctest::Approx(0.41875));
  CHECK(c.M.a22 == doctest::Approx(-2.225));
  CHECK(smalllin::lyapunov_residual(c.M, c.Q) < 1e-10);
  CHECK(c.Q.a11 > 0);
  CHECK(c.Q.det() > 0);

  // Q from the vectorized 3x3 system solved by Cramer's rule
  const double m11 = c.M.a11, m12 = c.M.a12, m21 = c.M.a21, m22 = c.M.a22;
  const double A[3][3] = {{2 * m11, 2 * m21, 0}, {m12, m11 + m22, m21}, {0, 2 * m12, 2 * m22}};
  const double rhs[3] = {-1, 0, -1};
  auto det3 = [](const double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  double q[3];
  for (int col = 0; col < 3; ++col) {
    double b[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b[i][j] = j == col ? rhs[i] : A[i][j];
    q[col] = det3(b) / det3(A);
  }
  CHECK(c.Q.a11 == doctest::Approx(q[0]));
  CHECK(c.Q.a12 == doctest::Approx(q[1]));
  CHECK(c.Q.a22 == doctest::Approx(q[2]));
  const double lmax = 0.5 * (q[0] + q[2]) + std::sqrt(0.25 * (q[0] - q[2]) * (q[0] - q[2]) + q[1] * q[1]);
  CHECK(c.normQ == doctest::Approx(lmax));
  CHECK(c.normQ == doctest::Approx(0.457548).epsilon(1e-5));
  CHECK(c.C == doctest::Approx(2.064432).epsilon(1e-5));
  CHECK(c.bound == doctest::Approx(0.064513).epsilon(1e-4));
}

TEST_CASE("certificate preconditions") {
  ParamValues v = testing::fig5_values();
  v.nu = 0;
  CHECK_THROWS_AS(certificate(ModelParams{v}), CertificateError);
  v = testing::fig5_values();
  v.beta = 20;
  CHECK_THROWS_AS(certificate(ModelParams{v}), CertificateError);
  CHECK_THROWS_AS(certificate(preset("fig1").params), CertificateError);
  v = testing::fig5_values();
  v.sigma_beta = v.sigma_mu = 0;
  CHECK(certificate(ModelParams{v}).bound == 0.0);
}

TEST_CASE("R0 monotonicity probe") {
  testing::Sampler rng(25);
  for (int k = 0; k < 20; ++k) CHECK(r0_monotonicity_probe(ModelParams{rng.values()}, 1000, 100 + k));
  for (const auto& name : preset_names()) CHECK(r0_monotonicity_probe(preset(name).params, 1000));
}
