#pragma once
// Canonical-form leapfrog recurrences. The coupled Laurent coefficients a_n,
// b_n are generated in the order b_1 -> a_1 -> b_2 -> a_2 -> ... from
//   a_0 = 1, b_0 = 0, b_1 = (k - x - delta_eff)/(2g)
// where the indicial quantization fixes a non-negative integer k and the
// rho_minus branch is the delta -> -delta mirror of rho_plus (delta_eff
// carries the sign). The gauge factor A = delta_eff + 2g b_1 equals k - x
// identically. Eigenvalues are the x where the trailing coefficients die:
// b_n(x) -> 0 (or equivalently a_n(x) -> 0); truncated root sets contain
// occasional non-physical members, removed by spurious_filter.

#include <vector>

#include "rabi/model.hpp"
#include "rabi/tridiag.hpp"

namespace rabi {

enum class Branch { rho_plus, rho_minus };

struct IndicialChoice {
  Branch branch = Branch::rho_plus;
  int k = 0;
};

// rho_plus: even k -> anti-symmetric, odd k -> symmetric; rho_minus reversed.
Parity parity_of(IndicialChoice choice);

struct LeapfrogState {
  std::vector<double> a; // a_0 .. a_m
  std::vector<double> b; // b_0 .. b_m (b may lead a by one index mid-step)
  double log_scale = 0.0; // accumulated log of rescale factors
  double run_max = 1.0;   // max |a_i|,|b_i| seen, post-rescale
  double x = 0.0;
  IndicialChoice choice;
  ModelParams params;
  double delta_eff = 0.0;
  double b1 = 0.0;
  double gauge_a = 0.0; // delta_eff + 2g b_1 == k - x
};

LeapfrogState init_leapfrog(double x, IndicialChoice choice, const ModelParams& p);

// Append a_n (requires a known to n-1, b known to n); returns the raw value.
double step_a(LeapfrogState& s, int n);
// Append b_n, n >= 2 (requires a known to n-1, b known to n-1); raw value.
double step_b(LeapfrogState& s, int n);

// Runs the leapfrog to index n and returns b_n (or a_n) divided by the
// running max over both sequences, so values are bounded and zero crossings
// are preserved. Overflow guarded by joint rescaling above 1e100.
double leapfrog_bn(double x, IndicialChoice choice, const ModelParams& p, int n);
double leapfrog_an(double x, IndicialChoice choice, const ModelParams& p, int n);

// Solution classes: 1 = generic x (neither integer nor half-integer);
// 2 = half-integer x (separatrix); 3 = integer x with A = 0 (doubly
// degenerate crossing point); 4 = integer x with A != 0.
int classify_solution(double x, IndicialChoice choice, const ModelParams& p, double tol = 1e-6);

// Gauge value as reported for a branch: k - x on rho_plus, x - k on rho_minus.
double branch_gauge(double x, IndicialChoice choice);

// Confluent hypergeometric 1F1(a, b; z) power series, term-count cap 500.
// Throws kummer_pole when b is a non-positive integer (within 1e-12).
double kummer_1f1(double a, double b, double z, double tol = 1e-15);

// Reflection self-consistency of the closed-form eigenfunction pair: builds
// F1(z) = e^{gz} M(1+alpha, 1+2alpha; -2gz) z^k with alpha = k - x, derives
// the partner component F2 from the first-order relation, and returns the
// max over z_samples of |F2(z) - (-1)^{k+1} F1(-z)| / max(1, |F1(-z)|).
// The rho_minus branch evaluates in the mirrored frame: same residual, with
// the parity label and reported gauge sign flipped elsewhere.
// Throws kummer_pole when 1 +- 2 alpha is a non-positive integer (half-integer
// gauge: separatrix / class-2 degeneracy) or when alpha ~ 0.
double eigenfunction_parity_check(double x, IndicialChoice choice, const ModelParams& p,
                                  const std::vector<double>& z_samples);

struct RootCandidate {
  double x = 0.0;
  IndicialChoice choice;
  int n_used = 0; // truncation index the root was found at
};

struct FilterOptions {
  double persist_tol = 1e-3; // allowed drift of a genuine root under n -> n+1
  double cross_tol = 1e-3;   // max distance to an oracle level of the implied parity
};

// Keeps a candidate only if it (i) persists under truncation increase
// n -> n+1 within persist_tol and (ii) matches an oracle level of the
// implied parity within cross_tol. Rejected candidates come back flagged
// spurious, never silently dropped. `oracle` must be the slice for
// parity_of(candidate.choice) (after any delta-sign swap).
std::vector<LevelRecord> spurious_filter(const std::vector<RootCandidate>& candidates,
                                         const ModelParams& p, const SpectrumSlice& oracle,
                                         const FilterOptions& opt = {});

} // namespace rabi
