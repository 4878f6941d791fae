#pragma once

#include <random>

#include "ncsir/model.hpp"

namespace testing {

inline ncsir::ParamValues fig5_values() {
  ncsir::ParamValues v;
  v.b = 0.3;
  v.delta = 1.0;
  v.beta = 0.5;
  v.gamma = 0.25;
  v.alpha = 0.25;
  v.mu = 8.0;
  v.nu = 1.0;
  v.xi = 0.0;
  v.sigma_beta = 0.125;
  v.sigma_mu = 0.125;
  return v;
}

struct Sampler {
  std::mt19937_64 gen;
  explicit Sampler(unsigned long long seed) : gen(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }

  ncsir::ParamValues values() {
    ncsir::ParamValues v;
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
    return v;
  }

  ncsir::State state(double scale) {
    return {uniform(0, scale), uniform(0, scale), uniform(0, scale),
            uniform(0, scale), uniform(0, scale), uniform(0, scale)};
  }
};

}  // namespace testing
