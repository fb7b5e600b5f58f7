#include "rabi/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rabi/errors.hpp"

namespace rabi {

Tridiagonal build_block(Parity parity, const ModelParams& p, int n_trunc) {
  if (n_trunc < 1) raise(Errc::bad_argument, "build_block: n_trunc must be >= 1");
  const int sigma = parity_sigma(parity, p);
  Tridiagonal m;
  m.diag.resize(static_cast<size_t>(n_trunc));
  m.off.resize(static_cast<size_t>(n_trunc) - 1);
  for (int n = 0; n < n_trunc; ++n) {
    const double alt = (n % 2 == 0) ? 1.0 : -1.0;
    m.diag[static_cast<size_t>(n)] = n + sigma * alt * p.delta;
    if (n + 1 < n_trunc) m.off[static_cast<size_t>(n)] = std::sqrt(n + 1.0) * p.g;
  }
  return m;
}

int sturm_count(const Tridiagonal& m, double lambda) {
  // Count of eigenvalues below lambda = sign agreements lost in the LDL^T
  // pivots q_i = (d_i - lambda) - e_{i-1}^2 / q_{i-1}.
  const size_t n = m.diag.size();
  int count = 0;
  double q = m.diag[0] - lambda;
  if (q < 0.0) ++count;
  for (size_t i = 1; i < n; ++i) {
    double denom = q;
    if (denom == 0.0) denom = std::numeric_limits<double>::min(); // grazing pivot
    q = (m.diag[i] - lambda) - m.off[i - 1] * m.off[i - 1] / denom;
    if (q < 0.0) ++count;
  }
  return count;
}

void gershgorin_bounds(const Tridiagonal& m, double& lo, double& hi) {
  const size_t n = m.diag.size();
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(m.off[i - 1]);
    if (i + 1 < n) r += std::abs(m.off[i]);
    lo = std::min(lo, m.diag[i] - r);
    hi = std::max(hi, m.diag[i] + r);
  }
  // Open the interval slightly so the strict counts at the ends are exact.
  const double pad = 1e-10 * (1.0 + std::abs(lo) + std::abs(hi));
  lo -= pad;
  hi += pad;
}

std::vector<double> eigenvalues_sturm(const Tridiagonal& m, int count, double tol) {
  const int n = static_cast<int>(m.diag.size());
  if (count < 1 || count > n) raise(Errc::bad_argument, "eigenvalues_sturm: need 1 <= count <= N");
  if (tol <= 0.0) raise(Errc::bad_argument, "eigenvalues_sturm: tol must be positive");
  double lo0, hi0;
  gershgorin_bounds(m, lo0, hi0);
  std::vector<double> out(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) {
    // Bisect for the j-th eigenvalue: smallest lambda with count(lambda) > j.
    double lo = lo0, hi = hi0;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break; // interval at floating-point resolution
      if (sturm_count(m, mid) > j)
        hi = mid;
      else
        lo = mid;
    }
    out[static_cast<size_t>(j)] = 0.5 * (lo + hi);
  }
  return out;
}

// Solve (M - lambda I) y = rhs by Gaussian elimination with partial pivoting.
// Row swaps introduce a second superdiagonal; near-singular pivots are exactly
// what make inverse iteration converge, so pivots are floored, not rejected.
static void solve_shifted(const Tridiagonal& m, double lambda, std::vector<double>& rhs,
                          std::vector<double>& y) {
  const size_t n = m.diag.size();
  std::vector<double> dl(n, 0.0), d(n), du(n, 0.0), du2(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    d[i] = m.diag[i] - lambda;
    if (i + 1 < n) {
      dl[i] = m.off[i];
      du[i] = m.off[i];
    }
  }
  for (size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(dl[i]) > std::abs(d[i])) {
      // Swap rows i and i+1, then eliminate.
      const double piv = dl[i];
      const double mult = d[i] / piv;
      const double d_next = d[i + 1];
      const double du_next = (i + 2 < n) ? du[i + 1] : 0.0;
      d[i] = piv;
      const double old_du = du[i];
      du[i] = d_next;
      du2[i] = du_next;
      d[i + 1] = old_du - mult * d_next;
      if (i + 2 < n) du[i + 1] = -mult * du_next;
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= mult * rhs[i];
    } else {
      double piv = d[i];
      if (piv == 0.0) piv = std::numeric_limits<double>::min();
      const double mult = dl[i] / piv;
      d[i + 1] -= mult * du[i];
      rhs[i + 1] -= mult * rhs[i];
    }
  }
  y.assign(n, 0.0);
  for (size_t ii = n; ii-- > 0;) {
    double s = rhs[ii];
    if (ii + 1 < n) s -= du[ii] * y[ii + 1];
    if (ii + 2 < n) s -= du2[ii] * y[ii + 2];
    double piv = d[ii];
    if (piv == 0.0) piv = std::numeric_limits<double>::min();
    y[ii] = s / piv;
  }
}

double eigenvector_residual(const Tridiagonal& m, double lambda) {
  const size_t n = m.diag.size();
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> rhs, y;
  for (int round = 0; round < 2; ++round) {
    rhs = v;
    solve_shifted(m, lambda, rhs, y);
    double norm = 0.0;
    for (double t : y) norm = std::max(norm, std::abs(t));
    if (norm == 0.0) raise(Errc::underflow, "inverse iteration produced a zero vector");
    for (size_t i = 0; i < n; ++i) v[i] = y[i] / norm;
  }
  // Residual ||Mv - lambda v||_inf / ||v||_inf (v already max-norm 1).
  double res = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double t = (m.diag[i] - lambda) * v[i];
    if (i > 0) t += m.off[i - 1] * v[i - 1];
    if (i + 1 < n) t += m.off[i] * v[i + 1];
    res = std::max(res, std::abs(t));
  }
  return res;
}

static int default_oracle_truncation(const ModelParams& p, int count) {
  const int heuristic = 4 * count + static_cast<int>(std::ceil(50.0 * p.g * p.g));
  return std::max(64, heuristic);
}

SpectrumSlice oracle_spectrum(const ModelParams& p, Parity parity, int count, int n_trunc) {
  if (count < 1) raise(Errc::bad_argument, "oracle_spectrum: count must be positive");
  constexpr int max_trunc = 16384;
  constexpr double certify = 1e-8;
  int N = n_trunc > 0 ? n_trunc : default_oracle_truncation(p, count);
  if (N < count) N = count;
  std::vector<double> prev = eigenvalues_sturm(build_block(parity, p, N), count);
  while (true) {
    if (2 * N > max_trunc)
      raise(Errc::non_converged, "oracle_spectrum: doubling check still moving at max truncation");
    std::vector<double> next = eigenvalues_sturm(build_block(parity, p, 2 * N), count);
    double drift = 0.0;
    for (int j = 0; j < count; ++j)
      drift = std::max(drift, std::abs(next[static_cast<size_t>(j)] - prev[static_cast<size_t>(j)]));
    if (drift < certify) {
      SpectrumSlice s;
      s.parity = parity;
      s.n_trunc = 2 * N;
      s.xs.resize(static_cast<size_t>(count));
      for (int j = 0; j < count; ++j)
        s.xs[static_cast<size_t>(j)] = to_shifted(next[static_cast<size_t>(j)], p.g);
      return s;
    }
    prev = std::move(next);
    N *= 2;
  }
}

double nearest_level_distance(const SpectrumSlice& s, double x) {
  double best = std::numeric_limits<double>::infinity();
  for (double lv : s.xs) best = std::min(best, std::abs(x - lv));
  return best;
}

} // namespace rabi
