#include "rabi/rootfind.hpp"

#include <cmath>

#include "rabi/errors.hpp"

namespace rabi {

// Valid means: outside every pole-exclusion zone. Poles sit only at
// non-negative integer x; pole_exclusion == 0 disables the notion entirely
// (entire functions like the leapfrog coefficients).
static bool valid_point(double x, double excl) {
  if (excl <= 0.0) return true;
  const double nearest = std::round(x);
  if (nearest < 0.0) return true;
  return std::abs(x - nearest) > excl;
}

std::vector<BracketedRoot> scan_and_bracket(const std::function<double(double)>& f,
                                            const ScanConfig& cfg) {
  if (!(cfg.grid_step > 0.0)) raise(Errc::bad_argument, "scan_and_bracket: grid_step must be > 0");
  if (!(cfg.x_max > cfg.x_min)) raise(Errc::bad_argument, "scan_and_bracket: empty interval");
  std::vector<BracketedRoot> out;
  const long steps = std::lround(std::ceil((cfg.x_max - cfg.x_min) / cfg.grid_step));
  bool have_prev = false;
  bool prev_adjacent = false; // previous valid point was the immediately preceding grid point
  double px = 0.0, pf = 0.0;
  for (long i = 0; i <= steps; ++i) {
    const double x = std::min(cfg.x_min + static_cast<double>(i) * cfg.grid_step, cfg.x_max);
    if (!valid_point(x, cfg.pole_exclusion)) {
      prev_adjacent = false; // a gap: the next sign change would straddle a pole
      continue;
    }
    const double fx = f(x);
    if (fx == 0.0) {
      // An exact zero on the grid is already a root; report it as a
      // degenerate bracket (the later comparisons skip zero endpoints, so it
      // is not double-counted by the surrounding sign change).
      BracketedRoot b;
      b.lo = b.hi = b.refined = x;
      out.push_back(b);
    } else if (have_prev && prev_adjacent && std::isfinite(fx) && std::isfinite(pf) &&
               ((fx < 0.0) != (pf < 0.0)) && pf != 0.0) {
      BracketedRoot b;
      b.lo = px;
      b.hi = x;
      b.f_lo = pf;
      b.f_hi = fx;
      out.push_back(b);
    }
    have_prev = true;
    prev_adjacent = true;
    px = x;
    pf = fx;
  }
  return out;
}

BracketedRoot refine_bisection(const std::function<double(double)>& f, BracketedRoot bracket,
                               double root_tol) {
  if (!(root_tol > 0.0)) raise(Errc::bad_argument, "refine_bisection: root_tol must be > 0");
  if (bracket.hi == bracket.lo) {
    bracket.refined = bracket.lo; // degenerate bracket from an exact grid zero
    return bracket;
  }
  if (!((bracket.f_lo < 0.0) != (bracket.f_hi < 0.0)))
    raise(Errc::bad_argument, "refine_bisection: bracket does not change sign");
  double lo = bracket.lo, hi = bracket.hi, flo = bracket.f_lo;
  int it = 0;
  while (hi - lo > root_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break; // floating-point resolution
    double fm;
    try {
      fm = f(mid);
    } catch (const Error& e) {
      if (e.code() == Errc::pole_at_baseline)
        raise(Errc::lost_bracket, "refine_bisection: pole inside bracket");
      throw;
    }
    ++it;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
  }
  bracket.lo = lo;
  bracket.hi = hi;
  bracket.refined = 0.5 * (lo + hi);
  bracket.iterations = it;
  return bracket;
}

std::vector<double> find_roots(const std::function<double(double)>& f, const ScanConfig& cfg) {
  std::vector<double> roots;
  for (auto& b : scan_and_bracket(f, cfg))
    roots.push_back(refine_bisection(f, b, cfg.root_tol).refined);
  return roots;
}

} // namespace rabi
