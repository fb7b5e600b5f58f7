#include "rabi/recurrence.hpp"

#include <cmath>

#include "rabi/errors.hpp"

namespace rabi {

// The series and recurrences have simple poles wherever x hits an integer
// baseline n >= 0 (through the delta^2/(n-x) term). Raise instead of
// returning huge values so that root scans can treat the guard distance as
// an exclusion zone.
static void check_pole(double x, int n_max, const char* who) {
  const double nearest = std::round(x);
  if (nearest >= 0.0 && nearest <= static_cast<double>(n_max) &&
      std::abs(x - nearest) < pole_guard)
    raise(Errc::pole_at_baseline,
          std::string(who) + ": x within pole guard of integer baseline");
}

double omega(int n, double x, const ModelParams& p) {
  if (n < 0) raise(Errc::bad_argument, "omega: n must be non-negative");
  require_positive_g(p, "omega");
  const double nmx = static_cast<double>(n) - x;
  if (std::abs(nmx) < pole_guard)
    raise(Errc::pole_at_baseline, "omega: x within pole guard of n");
  return (static_cast<double>(n) + 4.0 * p.g * p.g - x - p.delta * p.delta / nmx) / (2.0 * p.g);
}

PoincareRoots poincare_roots(const ModelParams& p) {
  require_positive_g(p, "poincare_roots");
  return {0.0, 1.0 / (2.0 * p.g)};
}

RecurrenceState forward_f(double x, const ModelParams& p, int n_max, bool with_e) {
  if (n_max < 1) raise(Errc::bad_argument, "forward_f: n_max must be >= 1");
  require_positive_g(p, "forward_f");
  check_pole(x, n_max, "forward_f");
  RecurrenceState st;
  st.x = x;
  st.params = p;
  st.f.resize(static_cast<size_t>(n_max) + 1);
  st.f[0] = 1.0;
  st.f[1] = omega(0, x, p);
  for (int n = 1; n < n_max; ++n)
    st.f[static_cast<size_t>(n) + 1] =
        (omega(n, x, p) * st.f[static_cast<size_t>(n)] - st.f[static_cast<size_t>(n) - 1]) /
        (n + 1.0);
  if (with_e) {
    std::vector<double> e(st.f.size());
    for (size_t m = 0; m < st.f.size(); ++m)
      e[m] = -p.delta * st.f[m] / (static_cast<double>(m) - x);
    st.e = std::move(e);
  }
  return st;
}

double moroz_f0(double x, const ModelParams& p, int n_trunc) {
  if (n_trunc < 2) raise(Errc::bad_argument, "moroz_f0: n_trunc must be >= 2");
  require_positive_g(p, "moroz_f0");
  check_pole(x, n_trunc, "moroz_f0");
  // Backward (Miller) pass: seed the two trailing values and run the
  // recurrence down; this projects onto the minimal solution. Mid-run
  // rescaling keeps the growing values finite.
  std::vector<double> f(static_cast<size_t>(n_trunc) + 2);
  f[static_cast<size_t>(n_trunc) + 1] = 0.0;
  f[static_cast<size_t>(n_trunc)] = 1.0;
  for (int n = n_trunc; n >= 1; --n) {
    f[static_cast<size_t>(n) - 1] =
        omega(n, x, p) * f[static_cast<size_t>(n)] - (n + 1.0) * f[static_cast<size_t>(n) + 1];
    const double mag = std::abs(f[static_cast<size_t>(n) - 1]);
    if (mag > 1e250) {
      for (size_t i = 0; i < f.size(); ++i) f[i] /= mag;
    }
  }
  double maxmag = 0.0;
  for (double v : f) maxmag = std::max(maxmag, std::abs(v));
  if (maxmag == 0.0 || !std::isfinite(maxmag))
    raise(Errc::underflow, "moroz_f0: backward recurrence rescale degenerated");
  // Boundary defect of the n = 0 equation (which encodes f_{-1} = 0): zero
  // exactly when the minimal solution extends to the boundary.
  return (f[1] - omega(0, x, p) * f[0]) / maxmag;
}

double braak_g(double x, Parity parity, const ModelParams& p, int n_trunc, bool* converged) {
  if (n_trunc < 2) raise(Errc::bad_argument, "braak_g: n_trunc must be >= 2");
  require_positive_g(p, "braak_g");
  const int n_ext = n_trunc + 10;
  check_pole(x, n_ext, "braak_g");
  const double sign = parity_sigma(parity, p) > 0 ? +1.0 : -1.0;
  // Accumulate the scaled terms t_n = g^n f_n directly; they stay bounded
  // (the minimal/dominant ratio times g is at most 1/2), so no overflow even
  // when f_n itself grows like (2g)^{-n}.
  double t_prev = 1.0;                      // t_0
  double t_cur = p.g * omega(0, x, p);      // t_1
  auto pole_factor = [&](int n) { return 1.0 + sign * p.delta / (static_cast<double>(n) - x); };
  double sum = t_prev * pole_factor(0) + t_cur * pole_factor(1);
  double sum_at_trunc = 0.0;
  for (int n = 1; n < n_ext; ++n) {
    const double t_next = (p.g * omega(n, x, p) * t_cur - p.g * p.g * t_prev) / (n + 1.0);
    sum += t_next * pole_factor(n + 1);
    t_prev = t_cur;
    t_cur = t_next;
    if (n + 1 == n_trunc) sum_at_trunc = sum;
  }
  if (converged) *converged = std::abs(sum - sum_at_trunc) < 1e-10;
  return sum_at_trunc;
}

} // namespace rabi
