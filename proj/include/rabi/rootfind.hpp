#pragma once
// Pole-aware 1-D root location: grid scan for sign changes, with exclusion
// zones around integer x where the transcendental functions have poles, then
// plain bisection refinement. Bisection (not secant/Brent) on purpose: the
// functions warp steeply near poles and bisection is unconditionally safe.

#include <functional>
#include <vector>

#include "rabi/model.hpp"

namespace rabi {

struct ScanConfig {
  double x_min = -1.0;
  double x_max = 5.0;
  double grid_step = 0.01;
  double pole_exclusion = 0.01; // half-width around integer x; 0 = no poles (entire functions)
  double root_tol = 1e-10;
};

struct BracketedRoot {
  double lo = 0.0, hi = 0.0;
  double f_lo = 0.0, f_hi = 0.0;
  double refined = 0.0;
  int iterations = 0;
};

// Every sign change between ADJACENT valid grid points becomes a bracket;
// sign changes straddling an exclusion zone are discarded (pole flips are
// not roots).
std::vector<BracketedRoot> scan_and_bracket(const std::function<double(double)>& f,
                                            const ScanConfig& cfg);

// Bisection until width <= root_tol. Throws lost_bracket if an evaluation
// raises the pole error inside the bracket.
BracketedRoot refine_bisection(const std::function<double(double)>& f, BracketedRoot bracket,
                               double root_tol);

// Convenience: scan, then refine every bracket; returns refined roots ascending.
std::vector<double> find_roots(const std::function<double(double)>& f, const ScanConfig& cfg);

} // namespace rabi
