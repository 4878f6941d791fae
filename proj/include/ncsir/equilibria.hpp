#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ncsir/model.hpp"
#include "ncsir/smalllin.hpp"

namespace ncsir {

/// Half-width of the band around a threshold inside which no verdict is given.
inline constexpr double kThresholdBand = 1e-9;

/// x1: everyone compliant (xi = 0). x2: mixed compliant/noncompliant (xi = 0).
/// x3: the single DFE when xi > 0.
enum class DfeKind { FullyCompliant, Mixed, Xi3 };

std::string_view to_string(DfeKind k);

struct DiseaseFreePoint {
  double s = 0.0;
  double s_star = 0.0;
  DfeKind kind = DfeKind::FullyCompliant;
  bool admissible = true;

  /// (s, 0, 0, s*, 0, 0).
  State as_state() const noexcept { return {s, 0.0, 0.0, s_star, 0.0, 0.0}; }
};

/// Next-generation linearization at a disease-free point, infectious block (I, I*).
struct NextGenPair {
  smalllin::Mat2 F;  // new infections
  smalllin::Mat2 V;  // transfers
};

enum class DeterministicVerdict { LocallyAsymptoticallyStable, Unstable, Inconclusive };
enum class StochasticVerdict { ExpMeanSquareStable, InfectionsDieOut, NoGuarantee };

std::string_view to_string(DeterministicVerdict v);
std::string_view to_string(StochasticVerdict v);

struct StabilityReport {
  DiseaseFreePoint dfe;
  std::optional<double> r0;        // absent for an inadmissible point
  std::optional<double> r0_sigma;  // present where a stochastic threshold applies
  std::array<double, 6> eigenvalues_dv{};
  bool condition_a5 = false;       // s - s* < (delta+nu)/mu
  DeterministicVerdict deterministic_verdict = DeterministicVerdict::Inconclusive;
  StochasticVerdict stochastic_verdict = StochasticVerdict::NoGuarantee;
  ParamValues inputs_echo;
};

struct ThresholdCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

struct LyapunovCertificate {
  smalllin::Mat2 M;  // F - V at the mixed DFE
  smalllin::Mat2 Q;  // M^T Q + Q M = -I
  double normQ = 0.0;
  double C = 0.0;
  double bound = 0.0;  // C (sigma_beta^2 + sigma_mu^2)
  DiseaseFreePoint dfe;
};

/// Precondition failure of the time-average certificate.
class CertificateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Disease-free equilibria. For xi = 0 both x1 and x2 are returned, x2 flagged
/// inadmissible when b/delta <= (delta+nu)/mu. For xi > 0 only x3.
std::vector<DiseaseFreePoint> solve_dfe(const ModelParams& p);

/// The DFE the time-average certificate refers to: x2 when xi = 0, x3 otherwise.
DiseaseFreePoint mixed_dfe(const ModelParams& p);

/// Throws std::invalid_argument when (s, s*) is outside the admissible simplex.
NextGenPair next_gen(const ModelParams& p, double s, double s_star);

/// Closed-form reproductive ratio at (s, s*).
double r0_det(const ModelParams& p, double s, double s_star);

/// rho(F V^{-1}) evaluated numerically; the cross-check for r0_det.
double r0_spectral(const ModelParams& p, double s, double s_star);

/// Stochastic extinction threshold at the fully compliant DFE (b/delta, 0).
double r0_sigma_compliant(const ModelParams& p);

/// Stochastic extinction threshold at the fully noncompliant DFE (0, b/delta).
double r0_sigma_noncompliant(const ModelParams& p);

/// b/delta + sigma_mu^2/(2 mu) (b/delta)^2 < (nu+delta)/mu.
ThresholdCheck noncompliance_threshold(const ModelParams& p);

/// Closed-form eigenvalues of DV at (s, s*), in the order
/// gamma+delta, gamma+delta+nu+mu s*, delta, delta, delta+nu+mu s*, delta+nu+mu(s*-s).
std::array<double, 6> dv_eigenvalues(const ModelParams& p, double s, double s_star);

/// Jacobian of the transfer field at (s, s*), ordering (I, I*, S, R, S*, R*).
smalllin::Mat6 dv_matrix(const ModelParams& p, double s, double s_star);

/// Max over the six closed-form eigenvalues of char_residual_6, and the tolerance
/// 1e-8 * ||DV||_inf^6 it is judged against.
struct EigenResidual {
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool ok() const { return max_residual < tolerance; }
};
EigenResidual dv_eigen_residual(const ModelParams& p, double s, double s_star);

std::vector<StabilityReport> classify(const ModelParams& p);

/// Throws CertificateError when nu = 0, when the mixed DFE does not exist
/// (xi = 0 and b/delta <= (delta+nu)/mu), or when r0 at that DFE is >= 1.
LyapunovCertificate certificate(const ModelParams& p);

/// Samples n admissible (s, s*) pairs plus the boundary s + s* = b/delta and
/// checks that r0_det increases along +s and +s* and peaks at (0, b/delta).
bool r0_monotonicity_probe(const ModelParams& p, int n, unsigned long long seed = 1);

}  // namespace ncsir
