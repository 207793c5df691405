#include "gausskey/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "gausskey/detail/entropy.hpp"
#include "gausskey/errors.hpp"

namespace gausskey {

namespace {

void check_mode(const CovMat& v, int mode, const char* what) {
  if (mode < 0 || mode >= v.modes()) {
    throw DomainError(std::string(what) + ": mode index " + std::to_string(mode) +
                      " outside [0, " + std::to_string(v.modes()) + ")");
  }
}

// Row/column indices of every mode except `mode`.
std::vector<int> other_indices(int modes, int mode) {
  std::vector<int> idx;
  idx.reserve(2 * (modes - 1));
  for (int k = 0; k < modes; ++k) {
    if (k == mode) continue;
    idx.push_back(2 * k);
    idx.push_back(2 * k + 1);
  }
  return idx;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

Spectrum sorted_spectrum(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  return Spectrum{std::move(values)};
}

}  // namespace

CovMat::CovMat(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0 || m_.rows() % 2 != 0) {
    throw DomainError("covariance matrix must be square with even, non-zero size");
  }
  if (!m_.allFinite()) throw DomainError("covariance matrix has non-finite entries");
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance) {
    throw DomainError("covariance matrix is not symmetric (max |V - V^T| = " +
                      std::to_string(asym) + ")");
  }
  m_ = 0.5 * (m_ + m_.transpose());
}

CovMat::CovMat(Eigen::MatrixXd m, Trusted) : m_(std::move(m)) {}

CovMat symmetrized(const Eigen::MatrixXd& m) {
  return CovMat(Eigen::MatrixXd(0.5 * (m + m.transpose())), CovMat::Trusted{});
}

Eigen::Matrix2d CovMat::block(int i, int j) const { return m_.block<2, 2>(2 * i, 2 * j); }

CovMat CovMat::select_modes(std::span<const int> modes) const {
  std::vector<int> idx;
  idx.reserve(2 * modes.size());
  for (int mode : modes) {
    check_mode(*this, mode, "select_modes");
    idx.push_back(2 * mode);
    idx.push_back(2 * mode + 1);
  }
  if (idx.empty()) throw DomainError("select_modes: no modes selected");
  return symmetrized(gather(m_, idx, idx));
}

CovMat CovMat::identity(int modes) {
  if (modes < 1) throw DomainError("identity: need at least one mode");
  return CovMat(Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

CovMat CovMat::thermal(double variance, int modes) {
  if (modes < 1) throw DomainError("thermal: need at least one mode");
  return CovMat(variance * Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

CovMat direct_sum(const CovMat& first, const CovMat& second) {
  const auto n1 = first.matrix().rows();
  const auto n2 = second.matrix().rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
  m.topLeftCorner(n1, n1) = first.matrix();
  m.bottomRightCorner(n2, n2) = second.matrix();
  return CovMat(std::move(m));
}

double Spectrum::min() const {
  if (values.empty()) throw DomainError("empty spectrum");
  return values.back();
}

Eigen::MatrixXd symplectic_form(int modes) {
  if (modes < 1) throw DomainError("symplectic_form: need at least one mode");
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

CovMat tmsv_cm(double mu) {
  if (!(mu >= 1.0)) throw DomainError("tmsv_cm: mu must be >= 1, got " + std::to_string(mu));
  const double c = std::sqrt((mu - 1.0) * (mu + 1.0));
  Eigen::MatrixXd m = mu * Eigen::MatrixXd::Identity(4, 4);
  m(0, 2) = m(2, 0) = c;
  m(1, 3) = m(3, 1) = -c;
  return CovMat(std::move(m));
}

Spectrum symplectic_spectrum_squared_route(const CovMat& v) {
  const Eigen::MatrixXd omega = symplectic_form(v.modes());
  const Eigen::MatrixXd ov = omega * v.matrix();
  const Eigen::MatrixXd m = -(ov * ov);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen-decomposition of -(Omega V)^2 failed");

  std::vector<std::complex<double>> ev(solver.eigenvalues().begin(), solver.eigenvalues().end());
  for (const auto& z : ev) {
    if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z))) {
      throw NumericalError("symplectic spectrum: eigenvalue with imaginary residue " +
                           std::to_string(z.imag()));
    }
  }
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) { return a.real() > b.real(); });
  // Each ν² appears twice; take every other one.
  std::vector<double> values;
  values.reserve(v.modes());
  for (std::size_t i = 0; i < ev.size(); i += 2) values.push_back(std::sqrt(std::abs(ev[i].real())));
  return sorted_spectrum(std::move(values));
}

Spectrum symplectic_spectrum(const CovMat& v) {
  Eigen::LLT<Eigen::MatrixXd> llt(v.matrix());
  if (llt.info() != Eigen::Success) return symplectic_spectrum_squared_route(v);

  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd k = l.transpose() * symplectic_form(v.modes()) * l;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(k);
  const auto& sv = svd.singularValues();  // descending, pairs of equal values
  std::vector<double> values;
  values.reserve(v.modes());
  for (Eigen::Index i = 0; i < sv.size(); i += 2) values.push_back(0.5 * (sv(i) + sv(i + 1)));
  return sorted_spectrum(std::move(values));
}

double entropy_h(double x) {
  if (std::isnan(x) || x < 1.0 - kPhysTolerance) {
    throw DomainError("entropy_h: unphysical symplectic eigenvalue " + std::to_string(x));
  }
  return detail::entropy_h_unchecked(x);
}

double entropy_h_asymptotic(double x) {
  if (!(x > 0.0)) throw DomainError("entropy_h_asymptotic: x must be positive");
  return std::log2(std::numbers::e / 2.0 * x);
}

double von_neumann_entropy(const CovMat& v) {
  double s = 0.0;
  for (double nu : symplectic_spectrum(v).values) s += entropy_h(nu);
  return s;
}

CovMat beamsplitter_apply(const CovMat& v, int mode_a, int mode_b, double tau) {
  check_mode(v, mode_a, "beamsplitter_apply");
  check_mode(v, mode_b, "beamsplitter_apply");
  if (mode_a == mode_b) throw DomainError("beamsplitter_apply: modes must be distinct");
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("beamsplitter_apply: tau must lie in [0, 1]");

  const double t = std::sqrt(tau);
  const double r = std::sqrt(1.0 - tau);
  const auto n = v.matrix().rows();
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
  for (int k = 0; k < 2; ++k) {
    const int a = 2 * mode_a + k;
    const int b = 2 * mode_b + k;
    s(a, a) = t;
    s(a, b) = r;
    s(b, a) = -r;
    s(b, b) = t;
  }
  return symmetrized(s * v.matrix() * s.transpose());
}

CovMat heterodyne_condition(const CovMat& v, int mode) {
  check_mode(v, mode, "heterodyne_condition");
  if (v.modes() < 2) throw DomainError("heterodyne_condition: need a mode left after measurement");

  const auto keep = other_indices(v.modes(), mode);
  const std::vector<int> measured{2 * mode, 2 * mode + 1};
  const Eigen::MatrixXd a = gather(v.matrix(), keep, keep);
  const Eigen::MatrixXd b = gather(v.matrix(), keep, measured);
  const Eigen::Matrix2d c = v.block(mode, mode) + Eigen::Matrix2d::Identity();
  const double det = c.determinant();
  if (!(std::abs(det) > 1e-300)) throw NumericalError("heterodyne_condition: singular C + I");
  return symmetrized(a - b * c.inverse() * b.transpose());
}

CovMat homodyne_condition(const CovMat& v, int mode, Quadrature quadrature) {
  check_mode(v, mode, "homodyne_condition");
  if (v.modes() < 2) throw DomainError("homodyne_condition: need a mode left after measurement");

  const int measured = 2 * mode + (quadrature == Quadrature::q ? 0 : 1);
  const double variance = v(measured, measured);
  if (!(variance > 1e-12)) throw NumericalError("homodyne_condition: degenerate measured quadrature");

  const auto keep = other_indices(v.modes(), mode);
  const Eigen::MatrixXd a = gather(v.matrix(), keep, keep);
  const Eigen::VectorXd b = gather(v.matrix(), keep, {measured});
  return symmetrized(a - b * b.transpose() / variance);
}

bool is_physical(const CovMat& v) {
  Eigen::LLT<Eigen::MatrixXd> llt(v.matrix());
  if (llt.info() != Eigen::Success) return false;
  try {
    return symplectic_spectrum(v).min() >= 1.0 - kPhysTolerance;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace gausskey
