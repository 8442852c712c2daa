#include "omm/gaussian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "omm/errors.hpp"

namespace omm {
namespace {

using Eigen::MatrixXcd;
using cplx = std::complex<double>;

constexpr double kResidualTarget = 1e-10;
constexpr double kPhysicalSlack = 1e-9;

void require_square(const MatrixXd& A, const char* who) {
  if (A.rows() != A.cols() || A.rows() == 0)
    throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
}

struct Schur {
  MatrixXcd T;
  MatrixXcd U;
};

Schur complex_schur(const MatrixXd& A) {
  Eigen::ComplexSchur<MatrixXcd> schur(A.cast<cplx>());
  if (schur.info() != Eigen::Success) throw NumericalError("Schur decomposition failed");
  return {schur.matrixT(), schur.matrixU()};
}

double abscissa(const MatrixXcd& T) {
  double m = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < T.rows(); ++i) m = std::max(m, T(i, i).real());
  return m;
}

// Solves A X + X A^T = -F in the Schur basis: T Y + Y T^H = -U^H F U.
MatrixXd schur_solve(const Schur& s, const MatrixXd& F) {
  const MatrixXcd& T = s.T;
  const Eigen::Index n = T.rows();
  const MatrixXcd G = s.U.adjoint() * F.cast<cplx>() * s.U;
  MatrixXcd Y = MatrixXcd::Zero(n, n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    for (Eigen::Index j = n - 1; j >= 0; --j) {
      cplx acc = -G(i, j);
      for (Eigen::Index k = i + 1; k < n; ++k) acc -= T(i, k) * Y(k, j);
      for (Eigen::Index k = j + 1; k < n; ++k) acc -= Y(i, k) * std::conj(T(j, k));
      const cplx den = T(i, i) + std::conj(T(j, j));
      if (den == 0.0) throw NumericalError("Lyapunov operator is singular");
      Y(i, j) = acc / den;
    }
  }
  return (s.U * Y * s.U.adjoint()).real();
}

MatrixXd kronecker_solve(const MatrixXd& A, const MatrixXd& D) {
  const Eigen::Index n = A.rows();
  const Eigen::Index nn = n * n;
  MatrixXd M = MatrixXd::Zero(nn, nn);
  // column-major vec: vec(A V) = (I (x) A) vec V, vec(V A^T) = (A (x) I) vec V
  for (Eigen::Index b = 0; b < n; ++b) M.block(b * n, b * n, n, n) += A;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      if (A(r, c) != 0.0) M.block(r * n, c * n, n, n).diagonal().array() += A(r, c);
  Eigen::FullPivLU<MatrixXd> lu(M);
  if (!lu.isInvertible()) throw NumericalError("Kronecker Lyapunov system is singular");
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(D.data(), nn);
  const Eigen::VectorXd v = lu.solve(rhs);
  return Eigen::Map<const MatrixXd>(v.data(), n, n);
}

MatrixXd residual_matrix(const MatrixXd& A, const MatrixXd& V, const MatrixXd& D) {
  return A * V + V * A.transpose() + D;
}

Eigen::VectorXcd eigenvalues_of_iOmegaC(const MatrixXd& C) {
  const auto modes = static_cast<std::size_t>(C.rows() / 2);
  const MatrixXcd M = cplx(0.0, 1.0) * (symplectic_form(modes) * C).cast<cplx>();
  Eigen::ComplexEigenSolver<MatrixXcd> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericalError("symplectic eigenvalue solve failed");
  return es.eigenvalues();
}

double min_modulus(const Eigen::VectorXcd& ev) {
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) m = std::min(m, std::abs(ev(i)));
  return m;
}

Matrix4d partially_transposed(const Matrix4d& C) {
  const Eigen::Vector4d p(1.0, -1.0, 1.0, 1.0);
  return p.asDiagonal() * C * p.asDiagonal();
}

}  // namespace

MatrixXd symplectic_form(std::size_t modes) {
  const auto n = static_cast<Eigen::Index>(2 * modes);
  MatrixXd W = MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; k += 2) {
    W(k, k + 1) = 1.0;
    W(k + 1, k) = -1.0;
  }
  return W;
}

double spectral_abscissa(const MatrixXd& A) {
  require_square(A, "spectral_abscissa");
  return abscissa(complex_schur(A).T);
}

double stability_tolerance(const MatrixXd& A) { return 1e-9 * A.norm(); }

bool is_stable(const MatrixXd& A) {
  return spectral_abscissa(A) < -stability_tolerance(A);
}

bool hurwitz_stable(const MatrixXd& A) {
  require_square(A, "hurwitz_stable");
  const Eigen::Index n = A.rows();
  if (n > 4) throw std::invalid_argument("hurwitz_stable: only implemented for n <= 4");

  // Faddeev-LeVerrier: det(s I - A) = s^n + c[1] s^(n-1) + ... + c[n]
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  MatrixXd M = MatrixXd::Zero(n, n);
  const MatrixXd I = MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = A * M + c[static_cast<std::size_t>(k - 1)] * I;
    c[static_cast<std::size_t>(k)] = -(A * M).trace() / static_cast<double>(k);
  }

  // Hurwitz matrix H(i, j) = c[2(j+1) - (i+1)]
  auto coeff = [&](Eigen::Index k) {
    return (k < 0 || k > n) ? 0.0 : c[static_cast<std::size_t>(k)];
  };
  MatrixXd H(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) H(i, j) = coeff(2 * (j + 1) - (i + 1));
  for (Eigen::Index k = 1; k <= n; ++k)
    if (!(H.topLeftCorner(k, k).determinant() > 0.0)) return false;
  return true;
}

MatrixXd solve_lyapunov(const MatrixXd& A, const MatrixXd& D, LyapunovMethod method) {
  require_square(A, "solve_lyapunov");
  if (D.rows() != A.rows() || D.cols() != A.cols())
    throw std::invalid_argument("solve_lyapunov: A and D dimensions differ");

  const Schur schur = complex_schur(A);
  if (!(abscissa(schur.T) < -stability_tolerance(A)))
    throw StabilityError("drift matrix is not stable; no steady-state covariance exists");

  MatrixXd V = method == LyapunovMethod::Kronecker ? kronecker_solve(A, D) : schur_solve(schur, D);
  V = 0.5 * (V + V.transpose()).eval();

  // Iterative refinement on the residual; near the stability boundary one pass
  // of the direct solve can leave residuals of order eps ||A|| ||V||.
  const double d_norm = D.norm();
  double res = residual_matrix(A, V, D).norm();
  for (int pass = 0; pass < 3 && res > 1e-3 * kResidualTarget * d_norm; ++pass) {
    const MatrixXd R = residual_matrix(A, V, D);
    MatrixXd dV = schur_solve(schur, R);
    MatrixXd trial = V + 0.5 * (dV + dV.transpose());
    const double trial_res = residual_matrix(A, trial, D).norm();
    if (!(trial_res < res)) break;
    V = std::move(trial);
    res = trial_res;
  }

  if (!std::isfinite(res) || res > kResidualTarget * d_norm)
    throw NumericalError("Lyapunov solve residual " + std::to_string(res / d_norm) +
                         " exceeds 1e-10");
  return V;
}

double lyapunov_residual(const MatrixXd& A, const MatrixXd& V, const MatrixXd& D) {
  return residual_matrix(A, V, D).norm() / D.norm();
}

Matrix4d bipartite_cm(const MatrixXd& V, std::size_t s1, std::size_t s2) {
  const auto modes = static_cast<std::size_t>(V.rows() / 2);
  if (s1 == s2) throw std::invalid_argument("bipartite_cm: modes must differ");
  if (s1 >= modes || s2 >= modes) throw std::invalid_argument("bipartite_cm: mode out of range");
  const std::array<Eigen::Index, 4> idx{static_cast<Eigen::Index>(2 * s1),
                                        static_cast<Eigen::Index>(2 * s1 + 1),
                                        static_cast<Eigen::Index>(2 * s2),
                                        static_cast<Eigen::Index>(2 * s2 + 1)};
  Matrix4d C;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) C(r, c) = V(idx[r], idx[c]);
  return C;
}

SymplecticEigenvalue min_symplectic_eig(const Matrix4d& C, bool partial_transpose) {
  SymplecticEigenvalue out;
  const double plain = min_modulus(eigenvalues_of_iOmegaC(C));
  out.physical = plain >= 0.5 - kPhysicalSlack;
  out.value = partial_transpose ? min_modulus(eigenvalues_of_iOmegaC(partially_transposed(C)))
                                : plain;
  return out;
}

double min_symplectic_eig_closed_form(const Matrix4d& C, bool partial_transpose) {
  const double det_a = C.topLeftCorner<2, 2>().determinant();
  const double det_b = C.bottomRightCorner<2, 2>().determinant();
  const double det_c = C.topRightCorner<2, 2>().determinant();
  const double det_all = C.determinant();
  const double sigma = det_a + det_b + (partial_transpose ? -2.0 : 2.0) * det_c;
  const double disc = std::max(0.0, sigma * sigma - 4.0 * det_all);
  // Rationalized root avoids cancellation when the state is strongly entangled.
  const double nu_sq = 2.0 * det_all / (sigma + std::sqrt(disc));
  return std::sqrt(nu_sq);
}

EntanglementResult log_negativity(const Matrix4d& C) {
  EntanglementResult r;
  r.nu_min = min_symplectic_eig(C, true).value;
  r.e_n = std::max(0.0, -std::log(2.0 * r.nu_min));
  // A product or vacuum state sits exactly at nu = 1/2; the eigensolver lands
  // a few ulps of |C| either side of it.
  const double roundoff = 16.0 * std::numeric_limits<double>::epsilon() * C.norm() / r.nu_min;
  if (r.e_n <= roundoff) r.e_n = 0.0;
  return r;
}

Eigen::VectorXd symplectic_eigenvalues(const MatrixXd& V) {
  require_square(V, "symplectic_eigenvalues");
  if (V.rows() % 2 != 0) throw std::invalid_argument("covariance matrix must have even size");
  const Eigen::VectorXcd ev = eigenvalues_of_iOmegaC(V);
  std::vector<double> mags(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(ev(i));
  std::sort(mags.begin(), mags.end());
  // eigenvalues come in +-nu pairs
  Eigen::VectorXd nu(V.rows() / 2);
  for (Eigen::Index k = 0; k < nu.size(); ++k)
    nu(k) = 0.5 * (mags[static_cast<std::size_t>(2 * k)] + mags[static_cast<std::size_t>(2 * k + 1)]);
  return nu;
}

bool check_physicality(const MatrixXd& V) {
  return symplectic_eigenvalues(V).minCoeff() >= 0.5 - kPhysicalSlack;
}

}  // namespace omm
