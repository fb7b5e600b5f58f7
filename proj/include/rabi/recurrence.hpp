#pragma once
// Displaced-basis three-term recurrence and the two transcendental functions
// built on it:
//   omega_n(x)   = (n + 4g^2 - x - delta^2/(n-x)) / (2g)
//   f_{n+1}      = (omega_n f_n - f_{n-1}) / (n+1),  f_0 = 1, f_1 = omega_0
//   F0(x)       -- boundary defect of the backward (Miller) minimal solution
//   G+-(x)      -- parity-resolved series sum g^n f_n (1 +- delta/(n-x))
// The recurrence has Poincare ratio roots 0 (minimal solution, the physical
// one) and 1/(2g) (dominant); eigenvalues are where the forward solution is
// minimal, equivalently where F0 or the matching-parity G vanishes.

#include <optional>
#include <vector>

#include "rabi/model.hpp"

namespace rabi {

// Evaluations closer than this to an integer baseline raise pole_at_baseline
// instead of returning a huge number (root scans must not chase pole flips).
constexpr double pole_guard = 1e-9;

double omega(int n, double x, const ModelParams& p);

struct RecurrenceState {
  std::vector<double> f;                       // f_0 .. f_n
  std::optional<std::vector<double>> e;        // e_m = -delta f_m / (m - x) on request
  double x = 0.0;
  ModelParams params;
};

struct PoincareRoots {
  double t_min = 0.0;
  double t_dom = 0.0; // 1/(2g)
};
PoincareRoots poincare_roots(const ModelParams& p);

RecurrenceState forward_f(double x, const ModelParams& p, int n_max, bool with_e = false);

// Miller-style backward pass seeded (f_{N+1}, f_N) = (0, 1), rescaled to
// max-norm 1; returns the n=0 boundary defect f_1 - omega_0 f_0, whose zero
// set in x is the full (parity-blind) spectrum.
double moroz_f0(double x, const ModelParams& p, int n_trunc = 60);

// Partial sum through n_trunc. When `converged` is given it receives the
// n_trunc vs n_trunc+10 comparison (|difference| < 1e-10).
double braak_g(double x, Parity parity, const ModelParams& p, int n_trunc = 60,
               bool* converged = nullptr);

} // namespace rabi
