#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ncsir/model.hpp"
#include "support.hpp"

using namespace ncsir;

namespace {

// Transition-by-transition bookkeeping, written independently of drift().
Vec6 drift_by_flows(const State& x, const ParamValues& v) {
  const double im = (1 - v.alpha) * x.I + x.I_star;
  const double ns = x.S_star + x.I_star + x.R_star;
  Vec6 f{};
  auto move = [&](Compartment from, Compartment to, double rate) {
    f[from] -= rate;
    f[to] += rate;
  };
  move(kS, kI, v.beta * (1 - v.alpha) * x.S * im);
  move(kSStar, kIStar, v.beta * x.S_star * im);
  move(kI, kR, v.gamma * x.I);
  move(kIStar, kRStar, v.gamma * x.I_star);
  move(kS, kSStar, v.mu * x.S * ns);
  move(kI, kIStar, v.mu * x.I * ns);
  move(kR, kRStar, v.mu * x.R * ns);
  move(kSStar, kS, v.nu * x.S_star);
  move(kIStar, kI, v.nu * x.I_star);
  move(kRStar, kR, v.nu * x.R_star);
  const Vec6 xs = x.to_vec();
  for (std::size_t i = 0; i < 6; ++i) f[i] -= v.delta * xs[i];
  f[kS] += (1 - v.xi) * v.b;
  f[kSStar] += v.xi * v.b;
  return f;
}

}  // namespace

TEST_CASE("parameter validation") {
  const ParamValues ok = testing::fig5_values();
  CHECK_NOTHROW(ModelParams{ok});
  auto bad = [&](auto mutate) {
    ParamValues v = ok;
    mutate(v);
    CHECK_THROWS_AS(ModelParams{v}, std::invalid_argument);
  };
  bad([](ParamValues& v) { v.b = 0; });
  bad([](ParamValues& v) { v.delta = -1; });
  bad([](ParamValues& v) { v.beta = 0; });
  bad([](ParamValues& v) { v.gamma = 0; });
  bad([](ParamValues& v) { v.mu = 0; });
  bad([](ParamValues& v) { v.nu = -0.1; });
  bad([](ParamValues& v) { v.alpha = 1.5; });
  bad([](ParamValues& v) { v.xi = -0.1; });
  bad([](ParamValues& v) { v.sigma_mu = -1; });
  bad([](ParamValues& v) { v.beta = std::numeric_limits<double>::quiet_NaN(); });
  bad([](ParamValues& v) { v.b = std::numeric_limits<double>::infinity(); });

  ParamValues edge = ok;
  edge.alpha = 1.0;
  edge.xi = 1.0;
  edge.nu = 0.0;
  edge.sigma_beta = edge.sigma_mu = 0.0;
  CHECK_NOTHROW(ModelParams{edge});
  CHECK(ModelParams{edge}.noiseless());
}

TEST_CASE("derived quantities and capacities") {
  const ModelParams p{testing::fig5_values()};
  const State x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const DerivedQuantities d = derived(x, p);
  CHECK(d.I_M == doctest::Approx(0.75 * 0.2 + 0.5));
  CHECK(d.N_star == doctest::Approx(1.5));
  CHECK(d.N_total == doctest::Approx(2.1));
  CHECK(p.capacity() == doctest::Approx(0.3));
  CHECK(p.noncompliance_capacity() == doctest::Approx(0.25));
  CHECK_FALSE(p.population_normalized());
  CHECK(x.min_component() == 0.1);
  CHECK(State::from_vec(x.to_vec()) == x);
}

TEST_CASE("drift matches flow bookkeeping") {
  testing::Sampler rng(11);
  for (int k = 0; k < 2000; ++k) {
    const ParamValues v = rng.values();
    const State x = rng.state(1.0);
    const Vec6 a = drift(x, ModelParams{v});
    const Vec6 b = drift_by_flows(x, v);
    for (std::size_t i = 0; i < 6; ++i) REQUIRE(a[i] == doctest::Approx(b[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("drift sums to b - delta N") {
  testing::Sampler rng(12);
  for (int k = 0; k < 10000; ++k) {
    const ModelParams p{rng.values()};
    const State x = rng.state(0.5);
    const Vec6 f = drift(x, p);
    const double sum = f[0] + f[1] + f[2] + f[3] + f[4] + f[5];
    REQUIRE(std::abs(sum - (p.b() - p.delta() * x.total())) < 1e-14);
  }
}

TEST_CASE("reduced diffusion components") {
  const ModelParams p{testing::fig5_values()};
  const State x{0.3, 0.2, 0.1, 0.05, 0.04, 0.01};
  const double sb = 0.125, sm = 0.125, a1 = 0.75;
  const Vec6 g = diffusion(x, p);
  CHECK(g[kS] == doctest::Approx(-sb * a1 * a1 * x.S * x.I - sm * x.S * x.S_star));
  CHECK(g[kI] == doctest::Approx(sb * a1 * a1 * x.S * x.I - sm * x.I * x.I_star));
  CHECK(g[kR] == doctest::Approx(-sm * x.R * x.R_star));
  CHECK(g[kSStar] == doctest::Approx(-sb * x.S_star * x.I_star + sm * x.S * x.S_star));
  CHECK(g[kIStar] == doctest::Approx(sb * x.S_star * x.I_star + sm * x.I * x.I_star));
  CHECK(g[kRStar] == doctest::Approx(sm * x.R * x.R_star));
}

TEST_CASE("full diffusion perturbs the drift transmission and conversion terms") {
  ParamValues v = testing::fig5_values();
  v.variant = NoiseVariant::Full;
  const ModelParams p{v};
  const State x{0.3, 0.2, 0.1, 0.05, 0.04, 0.01};
  const double im = 0.75 * x.I + x.I_star, ns = x.S_star + x.I_star + x.R_star;
  const Vec6 g = diffusion(x, p);
  CHECK(g[kS] == doctest::Approx(-0.125 * 0.75 * x.S * im - 0.125 * x.S * ns));
  CHECK(g[kIStar] == doctest::Approx(0.125 * x.S_star * im + 0.125 * x.I * ns));
  CHECK(g[kRStar] == doctest::Approx(0.125 * x.R * ns));
  CHECK(noise_variant_from_string("full") == NoiseVariant::Full);
  CHECK_THROWS_AS(noise_variant_from_string("both"), std::invalid_argument);
}

TEST_CASE("diffusion components cancel at 10^6 random states") {
  testing::Sampler rng(13);
  int exact_zero = 0;
  double worst = 0.0;
  for (int k = 0; k < 1000000; ++k) {
    ParamValues v = rng.values();
    if (k % 2) v.variant = NoiseVariant::Full;
    const Vec6 g = diffusion(rng.state(1.0), ModelParams{v});
    const double sum = ((g[0] + g[1]) + (g[2] + g[3])) + (g[4] + g[5]);
    double scale = 0.0;
    for (double c : g) scale += std::abs(c);
    if (sum == 0.0) ++exact_zero;
    if (scale > 0) worst = std::max(worst, std::abs(sum) / scale);
  }
  MESSAGE("bit-exact zero sums: " << exact_zero << " of 1000000");
  CHECK(worst <= 8 * std::numeric_limits<double>::epsilon());
}

TEST_CASE("zero noise gives zero diffusion and correction") {
  ParamValues v = testing::fig5_values();
  v.sigma_beta = v.sigma_mu = 0.0;
  const ModelParams p{v};
  const State x{0.3, 0.2, 0.1, 0.05, 0.04, 0.01};
  for (double c : diffusion(x, p)) CHECK(c == 0.0);
  for (double c : diffusion_directional_derivative(x, p)) CHECK(c == 0.0);
}

TEST_CASE("(DG)G against central differences, both variants") {
  testing::Sampler rng(14);
  const double h = 1e-6;
  for (int k = 0; k < 1000; ++k) {
    ParamValues v = rng.values();
    if (k % 2) v.variant = NoiseVariant::Full;
    const ModelParams p{v};
    const State x = rng.state(0.5);
    const Vec6 g = diffusion(x, p);
    Vec6 plus = x.to_vec(), minus = x.to_vec();
    for (std::size_t i = 0; i < 6; ++i) {
      plus[i] += h * g[i];
      minus[i] -= h * g[i];
    }
    const Vec6 gp = diffusion(State::from_vec(plus), p), gm = diffusion(State::from_vec(minus), p);
    const Vec6 dg = diffusion_directional_derivative(x, p);
    for (std::size_t i = 0; i < 6; ++i) REQUIRE(std::abs((gp[i] - gm[i]) / (2 * h) - dg[i]) < 1e-8);
  }
}
