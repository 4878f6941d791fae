#include "ncsir/smalllin.hpp"

#include <algorithm>
#include <cmath>

namespace ncsir::smalllin {

Mat2 inverse(const Mat2& m) {
  const double d = m.det();
  if (d == 0.0) throw std::domain_error("inverse of a singular 2x2 matrix");
  return {m.a22 / d, -m.a12 / d, -m.a21 / d, m.a11 / d};
}

double frobenius_norm(const Mat2& m) {
  return std::sqrt(m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22);
}

double row_sum_norm(const Mat2& m) {
  return std::max(std::abs(m.a11) + std::abs(m.a12), std::abs(m.a21) + std::abs(m.a22));
}

std::array<std::complex<double>, 2> eigenvalues_2x2(const Mat2& m) {
  // lambda = tr/2 +- sqrt(((a11-a22)/2)^2 + a12 a21); this form avoids the
  // cancellation in tr^2/4 - det when the eigenvalues are close.
  const double half_tr = 0.5 * m.trace();
  const double half_gap = 0.5 * (m.a11 - m.a22);
  const double disc = half_gap * half_gap + m.a12 * m.a21;
  std::complex<double> l1, l2;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    // Larger-magnitude root first, the other from the determinant when that is stable.
    const double big = half_tr >= 0.0 ? half_tr + r : half_tr - r;
    const double small = big != 0.0 ? m.det() / big : half_tr - (big - half_tr);
    l1 = std::max(big, small);
    l2 = std::min(big, small);
  } else {
    const double r = std::sqrt(-disc);
    l1 = {half_tr, r};
    l2 = {half_tr, -r};
  }
  return {l1, l2};
}

double spectral_radius(const Mat2& m) {
  const auto ev = eigenvalues_2x2(m);
  return std::max(std::abs(ev[0]), std::abs(ev[1]));
}

double spectral_abscissa(const Mat2& m) {
  return eigenvalues_2x2(m)[0].real();
}

double spectral_norm(const Mat2& m) {
  // sigma_max^2 is the larger eigenvalue of m^T m (symmetric PSD).
  const Mat2 g = m.transpose() * m;
  const double half_tr = 0.5 * g.trace();
  const double half_gap = 0.5 * (g.a11 - g.a22);
  const double r = std::hypot(half_gap, g.a12);
  return std::sqrt(std::max(0.0, half_tr + r));
}

Mat2 solve_lyapunov(const Mat2& m) {
  if (!(spectral_abscissa(m) < 0.0))
    throw NotHurwitzError("Lyapunov equation M^T Q + Q M = -I requires every eigenvalue of M to have negative real part");
  // Unknowns (q11, q12, q22); entries (1,1), (1,2), (2,2) of M^T Q + Q M = -I.
  const Mat<3> a{{{2.0 * m.a11, 2.0 * m.a21, 0.0},
                  {m.a12, m.a11 + m.a22, m.a21},
                  {0.0, 2.0 * m.a12, 2.0 * m.a22}}};
  const Vec<3> q = solve<3>(a, {-1.0, 0.0, -1.0});
  return {q[0], q[1], q[1], q[2]};
}

double lyapunov_residual(const Mat2& m, const Mat2& q) {
  return frobenius_norm(m.transpose() * q + q * m + Mat2::identity());
}

double char_residual_6(const Mat6& matrix, double lambda) {
  Mat6 shifted = matrix;
  for (std::size_t i = 0; i < 6; ++i) shifted[i][i] -= lambda;
  return std::abs(determinant<6>(shifted));
}

double row_sum_norm(const Mat6& m) {
  double best = 0.0;
  for (const auto& row : m) {
    double s = 0.0;
    for (double v : row) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace ncsir::smalllin
