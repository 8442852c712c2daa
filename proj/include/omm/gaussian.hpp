#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "omm/modes.hpp"

namespace omm {

using Eigen::Matrix4d;
using Eigen::MatrixXd;

// Conventions: quadratures X = (O + O^dag)/sqrt2, Y = (O - O^dag)/(i sqrt2), so
// the vacuum covariance matrix is I/2 and the symplectic form is a direct sum of
// [[0, 1], [-1, 0]] blocks.

/// Direct sum of `modes` blocks [[0, 1], [-1, 0]].
MatrixXd symplectic_form(std::size_t modes);

/// Largest real part over the eigenvalues of A.
double spectral_abscissa(const MatrixXd& A);

/// Margin below which an eigenvalue real part counts as non-negative: 1e-9 ||A||_F.
double stability_tolerance(const MatrixXd& A);

/// True iff every eigenvalue of A has real part < -stability_tolerance(A).
bool is_stable(const MatrixXd& A);

/// Routh-Hurwitz test through the Hurwitz determinants of the characteristic
/// polynomial. Only for n <= 4; the polynomial route is too ill-conditioned for
/// the full 12x12 drift matrix.
bool hurwitz_stable(const MatrixXd& A);

enum class LyapunovMethod {
  BartelsStewart,  ///< complex Schur form + triangular back substitution
  Kronecker,       ///< dense (I (x) A + A (x) I) vec V = -vec D solve
};

/// Solves A V + V A^T = -D for the steady-state covariance. Throws
/// StabilityError when A is not stable and NumericalError when the solve fails
/// to reach a relative residual of 1e-10.
MatrixXd solve_lyapunov(const MatrixXd& A, const MatrixXd& D,
                        LyapunovMethod method = LyapunovMethod::BartelsStewart);

/// ||A V + V A^T + D||_F / ||D||_F
double lyapunov_residual(const MatrixXd& A, const MatrixXd& V, const MatrixXd& D);

/// 4x4 covariance of modes (s1, s2): rows/cols (2 s1, 2 s1 + 1, 2 s2, 2 s2 + 1).
Matrix4d bipartite_cm(const MatrixXd& V, std::size_t s1, std::size_t s2);
inline Matrix4d bipartite_cm(const MatrixXd& V, Mode s1, Mode s2) {
  return bipartite_cm(V, index(s1), index(s2));
}

struct SymplecticEigenvalue {
  double value = 0.0;
  /// False when the untransposed state violates the uncertainty bound.
  bool physical = true;
};

/// Smallest modulus eigenvalue of i Omega (P C P), P = diag(1, -1, 1, 1) when
/// `partial_transpose`, otherwise of i Omega C.
SymplecticEigenvalue min_symplectic_eig(const Matrix4d& C, bool partial_transpose);

/// Same quantity from the two-mode invariants:
/// nu^2 = (S - sqrt(S^2 - 4 det C)) / 2, S = det a + det b +- 2 det c
/// (minus under partial transposition).
double min_symplectic_eig_closed_form(const Matrix4d& C, bool partial_transpose);

struct EntanglementResult {
  double nu_min = 0.0;
  double e_n = 0.0;
};

/// E_N = max(0, -ln(2 nu_min)) with nu_min taken under partial transposition.
EntanglementResult log_negativity(const Matrix4d& C);

/// Symplectic spectrum of an n-mode covariance matrix, ascending.
Eigen::VectorXd symplectic_eigenvalues(const MatrixXd& V);

/// True iff all symplectic eigenvalues of V are >= 1/2 - 1e-9.
bool check_physicality(const MatrixXd& V);

}  // namespace omm
