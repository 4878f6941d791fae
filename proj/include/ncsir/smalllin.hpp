#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace ncsir::smalllin {

/// Row-major 2x2 real matrix.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

  constexpr double trace() const { return a11 + a22; }
  constexpr double det() const { return a11 * a22 - a12 * a21; }
  constexpr Mat2 transpose() const { return {a11, a21, a12, a22}; }
  constexpr bool is_symmetric(double tol = 0.0) const {
    return (a12 - a21 <= tol) && (a21 - a12 <= tol);
  }

  bool operator==(const Mat2&) const = default;
};

constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}
constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}
constexpr Mat2 operator*(double s, const Mat2& a) { return {s * a.a11, s * a.a12, s * a.a21, s * a.a22}; }
constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

/// Throws std::domain_error when singular.
Mat2 inverse(const Mat2& m);

double frobenius_norm(const Mat2& m);

/// Max absolute row sum (induced infinity norm).
double row_sum_norm(const Mat2& m);

/// Roots of the characteristic polynomial, real part descending then
/// imaginary part descending.
std::array<std::complex<double>, 2> eigenvalues_2x2(const Mat2& m);

double spectral_radius(const Mat2& m);

/// Largest singular value.
double spectral_norm(const Mat2& m);

/// Max real part over both eigenvalues (spectral abscissa).
double spectral_abscissa(const Mat2& m);

/// Thrown when the Lyapunov equation is asked of a non-Hurwitz matrix.
class NotHurwitzError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Symmetric Q with m^T Q + Q m = -I, from the 3x3 system in (q11, q12, q22).
/// Requires both eigenvalues of m to have strictly negative real part.
Mat2 solve_lyapunov(const Mat2& m);

/// ||m^T Q + Q m + I||_F.
double lyapunov_residual(const Mat2& m, const Mat2& q);

template <std::size_t N>
using Mat = std::array<std::array<double, N>, N>;

template <std::size_t N>
using Vec = std::array<double, N>;

/// Determinant by LU with partial pivoting (the matrix is taken by value).
template <std::size_t N>
double determinant(Mat<N> a) {
  double det = 1.0;
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < N; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (a[piv][k] == 0.0) return 0.0;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (std::size_t i = k + 1; i < N; ++i) {
      const double l = a[i][k] / a[k][k];
      for (std::size_t j = k; j < N; ++j) a[i][j] -= l * a[k][j];
    }
  }
  return det;
}

/// Solves a x = rhs by Gaussian elimination with partial pivoting.
/// Throws std::domain_error on an exactly singular pivot.
template <std::size_t N>
Vec<N> solve(Mat<N> a, Vec<N> rhs) {
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < N; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (a[piv][k] == 0.0) throw std::domain_error("singular linear system");
    std::swap(a[piv], a[k]);
    std::swap(rhs[piv], rhs[k]);
    for (std::size_t i = k + 1; i < N; ++i) {
      const double l = a[i][k] / a[k][k];
      for (std::size_t j = k; j < N; ++j) a[i][j] -= l * a[k][j];
      rhs[i] -= l * rhs[k];
    }
  }
  Vec<N> x{};
  for (std::size_t k = N; k-- > 0;) {
    double acc = rhs[k];
    for (std::size_t j = k + 1; j < N; ++j) acc -= a[k][j] * x[j];
    x[k] = acc / a[k][k];
  }
  return x;
}

using Mat6 = Mat<6>;

/// |det(matrix - lambda I)|.
double char_residual_6(const Mat6& matrix, double lambda);

/// Max absolute row sum of a 6x6 matrix.
double row_sum_norm(const Mat6& m);

}  // namespace ncsir::smalllin
