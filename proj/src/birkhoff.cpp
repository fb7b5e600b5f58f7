#include "rabi/birkhoff.hpp"

#include <algorithm>
#include <cmath>

#include "rabi/errors.hpp"

namespace rabi {

Parity parity_of(IndicialChoice choice) {
  if (choice.k < 0) raise(Errc::bad_argument, "parity_of: k must be non-negative");
  const bool even = choice.k % 2 == 0;
  if (choice.branch == Branch::rho_plus)
    return even ? Parity::antisymmetric : Parity::symmetric;
  return even ? Parity::symmetric : Parity::antisymmetric;
}

double branch_gauge(double x, IndicialChoice choice) {
  const double a = static_cast<double>(choice.k) - x;
  return choice.branch == Branch::rho_plus ? a : -a;
}

LeapfrogState init_leapfrog(double x, IndicialChoice choice, const ModelParams& p) {
  require_positive_g(p, "init_leapfrog");
  if (choice.k < 0) raise(Errc::bad_argument, "init_leapfrog: k must be non-negative");
  LeapfrogState s;
  s.x = x;
  s.choice = choice;
  s.params = p;
  // The rho_minus branch is the delta -> -delta mirror of rho_plus; the sign
  // lives in delta_eff so the recurrences below are written once.
  s.delta_eff = choice.branch == Branch::rho_plus ? p.delta : -p.delta;
  s.b1 = (static_cast<double>(choice.k) - x - s.delta_eff) / (2.0 * p.g);
  s.gauge_a = s.delta_eff + 2.0 * p.g * s.b1; // == k - x identically
  s.a = {1.0};
  s.b = {0.0, s.b1};
  s.run_max = std::max(1.0, std::abs(s.b1));
  return s;
}

// Joint rescale of both sequences; the recurrences are linear homogeneous in
// (a, b), with b1 and A entering only as frozen coefficients, so a common
// factor changes nothing but the scale.
static void maybe_rescale(LeapfrogState& s) {
  if (s.run_max <= 1e100) return;
  const double f = s.run_max;
  for (double& v : s.a) v /= f;
  for (double& v : s.b) v /= f;
  s.log_scale += std::log(f);
  s.run_max = 1.0;
}

double step_a(LeapfrogState& s, int n) {
  if (n < 1) raise(Errc::bad_argument, "step_a: n must be >= 1");
  if (s.a.size() != static_cast<size_t>(n) || s.b.size() < static_cast<size_t>(n) + 1)
    raise(Errc::bad_argument, "step_a: sequences not at the expected indices");
  const double g = s.params.g;
  const double alt = (n % 2 == 0) ? 1.0 : -1.0; // (-1)^{n+1}
  // delta_eff enters as delta_eff * (1 + (-1)^{n+1}): zero for even n.
  const double coeff = 2.0 * g * s.b1 + s.delta_eff * (1.0 - alt);
  const double an = ((s.x - n + 1.0) * g * s.a[static_cast<size_t>(n) - 1] -
                     coeff * s.b[static_cast<size_t>(n)] -
                     g * s.gauge_a * s.b[static_cast<size_t>(n) - 1]) /
                    static_cast<double>(n);
  s.a.push_back(an);
  s.run_max = std::max(s.run_max, std::abs(an));
  maybe_rescale(s);
  return an;
}

double step_b(LeapfrogState& s, int n) {
  if (n < 2) raise(Errc::bad_argument, "step_b: n must be >= 2");
  if (s.b.size() != static_cast<size_t>(n) || s.a.size() < static_cast<size_t>(n))
    raise(Errc::bad_argument, "step_b: sequences not at the expected indices");
  const double g = s.params.g;
  const double alt = (n % 2 == 0) ? 1.0 : -1.0; // (-1)^n
  const double coeff = 2.0 * g * s.b1 + s.delta_eff * (1.0 + alt);
  const double bn = (g * s.gauge_a * s.a[static_cast<size_t>(n) - 2] +
                     coeff * s.a[static_cast<size_t>(n) - 1] +
                     g * (n - 2.0 - s.x) * s.b[static_cast<size_t>(n) - 2] +
                     (n - 1.0 - 2.0 * g * g) * s.b[static_cast<size_t>(n) - 1]) /
                    (2.0 * g);
  s.b.push_back(bn);
  s.run_max = std::max(s.run_max, std::abs(bn));
  maybe_rescale(s);
  return bn;
}

static LeapfrogState run_leapfrog(double x, IndicialChoice choice, const ModelParams& p, int n,
                                  bool need_a_n) {
  if (n < 1) raise(Errc::bad_argument, "leapfrog: n must be >= 1");
  LeapfrogState s = init_leapfrog(x, choice, p);
  // Generation order b_1 -> a_1 -> b_2 -> a_2 -> ... ; stop once b_n (and
  // a_n when requested) exists.
  for (int j = 1; j < n; ++j) {
    step_a(s, j);
    step_b(s, j + 1);
  }
  if (need_a_n) step_a(s, n);
  return s;
}

double leapfrog_bn(double x, IndicialChoice choice, const ModelParams& p, int n) {
  LeapfrogState s = run_leapfrog(x, choice, p, n, false);
  return s.b[static_cast<size_t>(n)] / s.run_max;
}

double leapfrog_an(double x, IndicialChoice choice, const ModelParams& p, int n) {
  LeapfrogState s = run_leapfrog(x, choice, p, n, true);
  return s.a[static_cast<size_t>(n)] / s.run_max;
}

int classify_solution(double x, IndicialChoice choice, const ModelParams& p, double tol) {
  (void)p;
  if (!(tol > 0.0)) raise(Errc::bad_argument, "classify_solution: tol must be > 0");
  const double nearest_int = std::round(x);
  const bool integer_x = std::abs(x - nearest_int) < tol;
  if (integer_x) {
    const double a = branch_gauge(x, choice);
    return std::abs(a) < tol ? 3 : 4;
  }
  const double nearest_half = std::floor(x) + 0.5;
  if (std::abs(x - nearest_half) < tol) return 2;
  return 1;
}

double kummer_1f1(double a, double b, double z, double tol) {
  if (!(tol > 0.0)) raise(Errc::bad_argument, "kummer_1f1: tol must be > 0");
  const double br = std::round(b);
  if (br <= 0.0 && std::abs(b - br) < 1e-12)
    raise(Errc::kummer_pole, "kummer_1f1: b parameter at a non-positive integer");
  double sum = 1.0;
  double term = 1.0;
  for (int m = 0; m < 500; ++m) {
    term *= (a + m) * z / ((b + m) * (m + 1.0));
    sum += term;
    if (!std::isfinite(sum))
      raise(Errc::non_converged, "kummer_1f1: series overflow");
    if (std::abs(term) <= tol * std::max(1.0, std::abs(sum))) return sum;
  }
  raise(Errc::non_converged, "kummer_1f1: series cap reached");
}

// z^k for non-negative integer k, exact for negative z.
static double ipow(double z, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

double eigenfunction_parity_check(double x, IndicialChoice choice, const ModelParams& p,
                                  const std::vector<double>& z_samples) {
  require_positive_g(p, "eigenfunction_parity_check");
  if (choice.k < 0) raise(Errc::bad_argument, "eigenfunction_parity_check: k must be >= 0");
  if (z_samples.empty())
    raise(Errc::bad_argument, "eigenfunction_parity_check: need at least one z sample");
  const int k = choice.k;
  const double g = p.g;
  // Both branches evaluate the same construction (the minus branch is the
  // mirrored frame; the mirror flips only the parity label and the reported
  // gauge sign, neither of which enters these formulas).
  const double alpha = static_cast<double>(k) - x;
  if (std::abs(alpha) < 1e-12)
    raise(Errc::kummer_pole,
          "eigenfunction_parity_check: vanishing gauge (x on its baseline), pair degenerate");
  for (double s : {1.0 + 2.0 * alpha, 1.0 - 2.0 * alpha}) {
    const double r = std::round(s);
    if (r <= 0.0 && std::abs(s - r) < 1e-12)
      raise(Errc::kummer_pole,
            "eigenfunction_parity_check: half-integer gauge (separatrix), Kummer parameter "
            "degenerates");
  }
  auto f1 = [&](double z) {
    return std::exp(g * z) * kummer_1f1(1.0 + alpha, 1.0 + 2.0 * alpha, -2.0 * g * z) * ipow(z, k);
  };
  auto f2 = [&](double z) {
    return (1.0 - 2.0 * g * z) / alpha * f1(z) -
           (1.0 + alpha) / alpha * std::exp(g * z) *
               kummer_1f1(2.0 + alpha, 1.0 + 2.0 * alpha, -2.0 * g * z) * ipow(z, k);
  };
  const double sign = (k % 2 == 0) ? -1.0 : 1.0; // (-1)^{k+1}
  double worst = 0.0;
  for (double z : z_samples) {
    const double ref = f1(-z);
    const double resid = std::abs(f2(z) - sign * ref) / std::max(1.0, std::abs(ref));
    worst = std::max(worst, resid);
  }
  return worst;
}

std::vector<LevelRecord> spurious_filter(const std::vector<RootCandidate>& candidates,
                                         const ModelParams& p, const SpectrumSlice& oracle,
                                         const FilterOptions& opt) {
  std::vector<LevelRecord> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    // (i) persistence: the root must survive the truncation bump n -> n+1
    // within persist_tol. Genuine roots drift slowly with n; most truncation
    // artifacts move far or vanish outright.
    bool persists = false;
    {
      const double w = 2.0 * opt.persist_tol;
      const int probes = 33;
      double px = 0.0, pf = 0.0;
      bool have = false;
      for (int i = 0; i < probes; ++i) {
        const double xx = c.x - w + 2.0 * w * i / (probes - 1.0);
        const double fx = leapfrog_bn(xx, c.choice, p, c.n_used + 1);
        if (have && ((fx < 0.0) != (pf < 0.0))) {
          double lo = px, hi = xx, flo = pf;
          for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = leapfrog_bn(mid, c.choice, p, c.n_used + 1);
            if ((fm < 0.0) == (flo < 0.0)) {
              lo = mid;
              flo = fm;
            } else {
              hi = mid;
            }
          }
          if (std::abs(0.5 * (lo + hi) - c.x) <= opt.persist_tol) {
            persists = true;
            break;
          }
        }
        have = true;
        px = xx;
        pf = fx;
      }
    }
    // (ii) oracle cross-check for the parity this (branch, k) generates.
    const double dist = nearest_level_distance(oracle, c.x);
    const bool matched = dist <= opt.cross_tol;

    LevelRecord rec;
    rec.x = c.x;
    rec.energy = to_energy(c.x, p.g);
    rec.parity = user_parity(parity_of(c.choice), p);
    rec.method = Method::birkhoff;
    rec.oracle_residual = dist;
    const BaselineLabel lbl = nearest_baseline(c.x);
    rec.k = lbl.k;
    rec.gauge_a = branch_gauge(c.x, {c.choice.branch, lbl.k});
    rec.solution_class = classify_solution(c.x, {c.choice.branch, lbl.k}, p);
    if (std::abs(std::abs(lbl.distance) - 0.5) < 1e-6) rec.flags |= flag_separatrix_adjacent;
    if (!(persists && matched)) rec.flags |= flag_spurious;
    out.push_back(rec);
  }
  return out;
}

} // namespace rabi
