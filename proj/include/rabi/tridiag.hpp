#pragma once
// Oracle spectrum: truncated parity blocks are symmetric tridiagonal matrices
//   diag[n] = n + sigma*(-1)^n*delta,  offdiag[n] = sqrt(n+1)*g
// diagonalized by an in-repo Sturm-sequence bisection solver. Convergence in
// the truncation size is certified empirically by a doubling check.

#include <vector>

#include "rabi/model.hpp"

namespace rabi {

struct Tridiagonal {
  std::vector<double> diag; // length N
  std::vector<double> off;  // length N-1
};

Tridiagonal build_block(Parity parity, const ModelParams& p, int n_trunc);

// Number of eigenvalues strictly below lambda (Sturm sign count).
int sturm_count(const Tridiagonal& m, double lambda);

// [lower, upper] containing all eigenvalues (Gershgorin discs).
void gershgorin_bounds(const Tridiagonal& m, double& lo, double& hi);

// Lowest `count` eigenvalues, each bracketed to width < tol by bisection.
std::vector<double> eigenvalues_sturm(const Tridiagonal& m, int count, double tol = 1e-12);

// Max-norm relative residual ||Mv - lambda v|| / ||v|| of the inverse-iteration
// eigenvector for an already-converged lambda.
double eigenvector_residual(const Tridiagonal& m, double lambda);

struct SpectrumSlice {
  std::vector<double> xs; // shifted energies x = E + g^2, ascending
  Parity parity = Parity::symmetric;
  int n_trunc = 0; // truncation that passed the doubling check
};

// n_trunc = 0 picks the default heuristic max(64, 4*count + ceil(50 g^2)).
// The result is accepted only once doubling the truncation moves every level
// by < 1e-8; throws non_converged if that never happens below the cap.
SpectrumSlice oracle_spectrum(const ModelParams& p, Parity parity, int count, int n_trunc = 0);

// Smallest oracle distance |x - level| over a slice (infinity for empty).
double nearest_level_distance(const SpectrumSlice& s, double x);

} // namespace rabi
