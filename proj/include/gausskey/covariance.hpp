#pragma once

// Gaussian-state covariance calculus in shot-noise units.
//
// Modes are stored interleaved, (q1, p1, q2, p2, ...), and indexed from 0.
// Every function is pure; CovMat is an immutable value.

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gausskey {

/// Slack on the uncertainty relation: ν ≥ 1 − kPhysTolerance counts as physical.
inline constexpr double kPhysTolerance = 1e-9;

/// Absolute tolerance on V − Vᵀ accepted by the CovMat constructor.
inline constexpr double kSymmetryTolerance = 1e-12;

enum class Quadrature { q, p };

/// Real symmetric 2n×2n covariance matrix of an n-mode Gaussian state.
class CovMat {
 public:
  /// Throws DomainError unless `m` is square, of even size and symmetric
  /// to within kSymmetryTolerance. The stored matrix is exactly symmetric.
  explicit CovMat(Eigen::MatrixXd m);

  int modes() const noexcept { return static_cast<int>(m_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  double operator()(int row, int col) const { return m_(row, col); }

  /// 2×2 block coupling mode i (rows) with mode j (columns).
  Eigen::Matrix2d block(int i, int j) const;

  /// Reduced state of the listed modes, in the listed order (partial trace
  /// when modes are dropped, permutation when they are reordered).
  CovMat select_modes(std::span<const int> modes) const;

  static CovMat identity(int modes);
  static CovMat thermal(double variance, int modes = 1);

 private:
  struct Trusted {};
  CovMat(Eigen::MatrixXd m, Trusted);
  friend CovMat symmetrized(const Eigen::MatrixXd& m);

  Eigen::MatrixXd m_;
};

/// Builds a CovMat from a result that is symmetric up to rounding.
CovMat symmetrized(const Eigen::MatrixXd& m);

/// V₁ ⊕ V₂, modes of `first` followed by modes of `second`.
CovMat direct_sum(const CovMat& first, const CovMat& second);

/// Symplectic eigenvalues, sorted descending, one per mode.
struct Spectrum {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double min() const;
};

/// ⊕ⁿ [[0, 1], [−1, 0]].
Eigen::MatrixXd symplectic_form(int modes);

/// Two-mode squeezed vacuum: μI on the diagonal blocks, √(μ²−1)·diag(1,−1)
/// off the diagonal. Throws DomainError for μ < 1.
CovMat tmsv_cm(double mu);

/// Symplectic spectrum of V.
///
/// Positive-definite input goes through V = LLᵀ and the singular values of
/// the antisymmetric matrix LᵀΩL, which come in equal pairs ±iν; this keeps
/// full accuracy on ν ≈ 1 even when V has entries ~1e6. Other input falls
/// back to the eigenvalues ν² of the real matrix −(ΩV)², rejecting any with a
/// relative imaginary part above 1e-9 (NumericalError).
Spectrum symplectic_spectrum(const CovMat& v);

/// Eigenvalues of −(ΩV)², square-rooted. Exposed as an independent route
/// for cross-checking symplectic_spectrum.
Spectrum symplectic_spectrum_squared_route(const CovMat& v);

/// h(x) = (x+1)/2·log₂((x+1)/2) − (x−1)/2·log₂((x−1)/2), in bits.
/// Inputs in [1 − kPhysTolerance, 1] are clamped to 1; smaller ones throw
/// DomainError.
double entropy_h(double x);

/// log₂((e/2)·x), the large-x behaviour of entropy_h. Throws for x ≤ 0.
double entropy_h_asymptotic(double x);

/// Σₖ h(νₖ) over the symplectic spectrum.
double von_neumann_entropy(const CovMat& v);

/// Mixes two modes on a beam splitter of transmissivity τ:
///   a → √τ a + √(1−τ) b,   b → −√(1−τ) a + √τ b.
/// The transmitted output replaces `mode_a`.
CovMat beamsplitter_apply(const CovMat& v, int mode_a, int mode_b, double tau);

/// Conditional CM after heterodyning `mode`: A − B(C + I)⁻¹Bᵀ.
CovMat heterodyne_condition(const CovMat& v, int mode);

/// Conditional CM after homodyning one quadrature of `mode`:
/// A − B(ΠCΠ)⁺Bᵀ with the pseudo-inverse taken entrywise.
CovMat homodyne_condition(const CovMat& v, int mode, Quadrature quadrature);

/// True iff V > 0 and every symplectic eigenvalue is ≥ 1 − kPhysTolerance.
bool is_physical(const CovMat& v);

}  // namespace gausskey
