#include "rabi/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rabi/errors.hpp"
#include "rabi/recurrence.hpp"

namespace rabi {

int default_truncation(Method m) {
  switch (m) {
    case Method::diag: return 0;      // oracle picks its own heuristic
    case Method::moroz: return 60;
    case Method::braak: return 60;
    case Method::birkhoff: return 12;
  }
  return 0;
}

// Enough oracle levels to cover [x_min, x_max]: level j of either block lies
// near x ~ j for desk-scale couplings, so pad by a few.
static int levels_for_window(double x_max) {
  const int rough = static_cast<int>(std::ceil(std::max(1.0, x_max + 2.0)));
  return std::max(8, rough + 2);
}

static LevelRecord make_record(double x, Parity parity, Method method, double residual,
                               const ModelParams& p, Branch branch_for_gauge, bool branchless) {
  LevelRecord rec;
  rec.x = x;
  rec.energy = to_energy(x, p.g);
  rec.parity = parity;
  rec.method = method;
  rec.oracle_residual = residual;
  const BaselineLabel lbl = nearest_baseline(x);
  rec.k = lbl.k;
  rec.gauge_a = branchless ? lbl.distance : branch_gauge(x, {branch_for_gauge, lbl.k});
  rec.solution_class = classify_solution(x, {branch_for_gauge, lbl.k}, p);
  if (std::abs(std::abs(lbl.distance) - 0.5) < 1e-6) rec.flags |= flag_separatrix_adjacent;
  return rec;
}

void sort_level_rows(std::vector<LevelRecord>& rows) {
  std::sort(rows.begin(), rows.end(), [](const LevelRecord& a, const LevelRecord& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.parity != b.parity) return a.parity == Parity::symmetric;
    return static_cast<int>(a.method) < static_cast<int>(b.method);
  });
}

static void append_diag(const SpectrumRequest& req, Parity parity, std::vector<LevelRecord>& rows) {
  const SpectrumSlice s =
      oracle_spectrum(req.params, parity, levels_for_window(req.x_max), req.n);
  for (double x : s.xs)
    if (x >= req.x_min && x <= req.x_max)
      rows.push_back(make_record(x, parity, Method::diag, 0.0, req.params, Branch::rho_plus, true));
}

static void append_moroz(const SpectrumRequest& req, const SpectrumSlice& sym,
                         const SpectrumSlice& anti, std::vector<LevelRecord>& rows) {
  const int n = req.n > 0 ? req.n : default_truncation(Method::moroz);
  ScanConfig cfg;
  cfg.x_min = req.x_min;
  cfg.x_max = req.x_max;
  cfg.grid_step = req.grid_step;
  cfg.pole_exclusion = std::max(req.grid_step, 100.0 * pole_guard);
  const auto roots = find_roots(
      [&](double x) { return moroz_f0(x, req.params, n); }, cfg);
  for (double r : roots) {
    // F0 is parity-blind: assign the parity of the nearest oracle level, and
    // mark the root unverified when neither tower claims it.
    const double ds = nearest_level_distance(sym, r);
    const double da = nearest_level_distance(anti, r);
    const Parity parity = ds <= da ? Parity::symmetric : Parity::antisymmetric;
    const double dist = std::min(ds, da);
    LevelRecord rec =
        make_record(r, parity, Method::moroz, dist, req.params, Branch::rho_plus, true);
    if (dist > req.cross_tol) rec.flags |= flag_unverified;
    if ((parity == Parity::symmetric && !req.want_sym) ||
        (parity == Parity::antisymmetric && !req.want_anti))
      continue;
    rows.push_back(rec);
  }
}

static void append_braak(const SpectrumRequest& req, Parity parity, const SpectrumSlice& oracle,
                         std::vector<LevelRecord>& rows) {
  const int n = req.n > 0 ? req.n : default_truncation(Method::braak);
  ScanConfig cfg;
  cfg.x_min = req.x_min;
  cfg.x_max = req.x_max;
  cfg.grid_step = req.grid_step;
  cfg.pole_exclusion = std::max(req.grid_step, 100.0 * pole_guard);
  const auto roots = find_roots(
      [&](double x) { return braak_g(x, parity, req.params, n); }, cfg);
  for (double r : roots) {
    const double dist = nearest_level_distance(oracle, r);
    LevelRecord rec = make_record(r, parity, Method::braak, dist, req.params, Branch::rho_plus, true);
    if (dist > req.cross_tol) rec.flags |= flag_unverified;
    rows.push_back(rec);
  }
}

static void append_birkhoff(const SpectrumRequest& req, IndicialChoice choice,
                            const SpectrumSlice& oracle, std::vector<LevelRecord>& rows) {
  const int n = req.n > 0 ? req.n : default_truncation(Method::birkhoff);
  ScanConfig cfg;
  cfg.x_min = req.x_min;
  cfg.x_max = req.x_max;
  cfg.grid_step = req.grid_step;
  cfg.pole_exclusion = 0.0; // the leapfrog coefficients are entire in x
  const auto roots =
      find_roots([&](double x) { return leapfrog_bn(x, choice, req.params, n); }, cfg);
  std::vector<RootCandidate> cands;
  for (double r : roots) cands.push_back({r, choice, n});
  FilterOptions fo;
  fo.cross_tol = req.cross_tol;
  for (auto& rec : spurious_filter(cands, req.params, oracle, fo)) rows.push_back(rec);
}

SpectrumTable compute_spectrum(const SpectrumRequest& req) {
  if (!(req.x_max > req.x_min)) raise(Errc::bad_argument, "compute_spectrum: empty x window");
  if (!req.want_sym && !req.want_anti)
    raise(Errc::bad_argument, "compute_spectrum: no parity selected");
  if (req.method != Method::diag) require_positive_g(req.params, "compute_spectrum");

  SpectrumTable table;
  const bool need_oracle = req.method != Method::diag;
  SpectrumSlice sym, anti;
  if (need_oracle) {
    const int cnt = levels_for_window(req.x_max);
    sym = oracle_spectrum(req.params, Parity::symmetric, cnt);
    anti = oracle_spectrum(req.params, Parity::antisymmetric, cnt);
  }

  auto dispatch = [&](Method m) {
    switch (m) {
      case Method::diag:
        if (req.want_sym) append_diag(req, Parity::symmetric, table.rows);
        if (req.want_anti) append_diag(req, Parity::antisymmetric, table.rows);
        break;
      case Method::moroz:
        append_moroz(req, sym, anti, table.rows);
        break;
      case Method::braak:
        if (req.want_sym) append_braak(req, Parity::symmetric, sym, table.rows);
        if (req.want_anti) append_braak(req, Parity::antisymmetric, anti, table.rows);
        break;
      case Method::birkhoff: {
        std::vector<IndicialChoice> choices;
        if (req.choice) {
          choices.push_back(*req.choice);
        } else {
          // Default pair covers both parities on the plus branch.
          choices.push_back({Branch::rho_plus, 0});
          choices.push_back({Branch::rho_plus, 1});
        }
        for (auto ch : choices) {
          const Parity up = user_parity(parity_of(ch), req.params);
          if ((up == Parity::symmetric && !req.want_sym) ||
              (up == Parity::antisymmetric && !req.want_anti))
            continue;
          append_birkhoff(req, ch, up == Parity::symmetric ? sym : anti, table.rows);
        }
        break;
      }
    }
  };

  dispatch(req.method);
  sort_level_rows(table.rows);
  for (const auto& r : table.rows)
    if (r.flags & flag_spurious) table.any_spurious = true;
  return table;
}

std::vector<ScanSample> tabulate(const ScanRequest& req) {
  if (!(req.x_max > req.x_min)) raise(Errc::bad_argument, "tabulate: empty x window");
  require_positive_g(req.params, "tabulate");
  const bool entire = req.function == ScanFunction::bn;
  const double excl = entire ? 0.0 : std::max(req.pole_exclusion, 100.0 * pole_guard);
  int n = req.n;
  if (n <= 0) n = req.function == ScanFunction::bn ? default_truncation(Method::birkhoff) : 60;
  auto eval = [&](double x) -> double {
    switch (req.function) {
      case ScanFunction::f0: return moroz_f0(x, req.params, n);
      case ScanFunction::gplus: return braak_g(x, Parity::symmetric, req.params, n);
      case ScanFunction::gminus: return braak_g(x, Parity::antisymmetric, req.params, n);
      case ScanFunction::bn: return leapfrog_bn(x, req.choice, req.params, n);
    }
    raise(Errc::bad_argument, "tabulate: unknown function");
  };
  std::vector<ScanSample> out;
  const long steps = std::lround(std::ceil((req.x_max - req.x_min) / req.grid_step));
  for (long i = 0; i <= steps; ++i) {
    const double x = std::min(req.x_min + static_cast<double>(i) * req.grid_step, req.x_max);
    ScanSample s;
    s.x = x;
    const double nearest = std::round(x);
    const bool in_zone = !entire && nearest >= 0.0 && std::abs(x - nearest) <= excl;
    if (in_zone) {
      s.value = std::numeric_limits<double>::quiet_NaN();
      s.pole = true;
    } else {
      s.value = eval(x);
    }
    out.push_back(s);
  }
  return out;
}

SweepResult run_sweep(const SweepRequest& req) {
  if (req.steps < 2) raise(Errc::bad_argument, "run_sweep: need at least 2 steps");
  if (!(req.g_max > req.g_min) || req.g_min <= 0.0)
    raise(Errc::bad_argument, "run_sweep: need 0 < g_min < g_max");
  if (req.levels < 1) raise(Errc::bad_argument, "run_sweep: need at least one level");

  SweepResult res;
  res.grid.resize(static_cast<size_t>(req.steps));
  // Track x per (parity, level index) across the grid for crossing detection.
  std::vector<std::vector<double>> track_sym(static_cast<size_t>(req.steps)),
      track_anti(static_cast<size_t>(req.steps));
  for (int i = 0; i < req.steps; ++i) {
    const double g =
        req.g_min + (req.g_max - req.g_min) * static_cast<double>(i) / (req.steps - 1.0);
    res.grid[static_cast<size_t>(i)] = g;
    const ModelParams p = make_params(g, req.delta);
    for (Parity parity : {Parity::symmetric, Parity::antisymmetric}) {
      const SpectrumSlice s = oracle_spectrum(p, parity, req.levels);
      (parity == Parity::symmetric ? track_sym : track_anti)[static_cast<size_t>(i)] = s.xs;
      for (double x : s.xs) {
        SweepRow row;
        row.g = g;
        row.x = x;
        row.parity = parity;
        const BaselineLabel lbl = nearest_baseline(x);
        row.k = lbl.k;
        row.gauge_a = lbl.distance;
        res.rows.push_back(row);
      }
    }
  }
  std::sort(res.rows.begin(), res.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.g != b.g) return a.g < b.g;
    if (a.x != b.x) return a.x < b.x;
    return a.parity == Parity::symmetric && b.parity != Parity::symmetric;
  });

  // A crossing interval: the signed baseline distance of one level flips sign
  // between adjacent steps while its k label is unchanged (label jumps are
  // separatrix hops, not crossings). A flip is "paired" when the opposite
  // parity flips at the same baseline in the same interval and the linearly
  // interpolated gap dips below crossing_tol (degenerate, both levels meeting
  // on the baseline).
  struct Flip {
    int step = 0;
    int k = 0;
    Parity parity = Parity::symmetric;
    double x_lo = 0.0, x_hi = 0.0;
  };
  std::vector<Flip> flips;
  auto scan_flips = [&](const std::vector<std::vector<double>>& track, Parity parity) {
    for (int i = 0; i + 1 < req.steps; ++i) {
      const auto& cur = track[static_cast<size_t>(i)];
      const auto& nxt = track[static_cast<size_t>(i) + 1];
      const size_t m = std::min(cur.size(), nxt.size());
      for (size_t j = 0; j < m; ++j) {
        const BaselineLabel la = nearest_baseline(cur[j]);
        const BaselineLabel lb = nearest_baseline(nxt[j]);
        if (la.k != lb.k) continue;
        // A distance at solver-noise level means the level sits on the
        // baseline (the uncoupled limit rides along it); not a crossing.
        if (std::abs(la.distance) < 1e-9 || std::abs(lb.distance) < 1e-9) continue;
        if ((la.distance < 0.0) != (lb.distance < 0.0))
          flips.push_back({i, la.k, parity, cur[j], nxt[j]});
      }
    }
  };
  scan_flips(track_sym, Parity::symmetric);
  scan_flips(track_anti, Parity::antisymmetric);

  std::vector<bool> used(flips.size(), false);
  for (size_t i = 0; i < flips.size(); ++i) {
    if (used[i]) continue;
    bool paired = false;
    for (size_t j = i + 1; j < flips.size() && !paired; ++j) {
      if (used[j] || flips[j].step != flips[i].step || flips[j].k != flips[i].k ||
          flips[j].parity == flips[i].parity)
        continue;
      // Minimum of the interpolated gap across the interval.
      const double d0 = flips[i].x_lo - flips[j].x_lo;
      const double d1 = flips[i].x_hi - flips[j].x_hi;
      double gap_min = std::min(std::abs(d0), std::abs(d1));
      if ((d0 < 0.0) != (d1 < 0.0)) gap_min = 0.0; // gap changes sign inside
      if (gap_min < req.crossing_tol) {
        paired = true;
        used[j] = true;
      }
    }
    used[i] = true;
    CrossingEvent ev;
    ev.g_lo = res.grid[static_cast<size_t>(flips[i].step)];
    ev.g_hi = res.grid[static_cast<size_t>(flips[i].step) + 1];
    ev.k = flips[i].k;
    ev.parity = flips[i].parity;
    ev.paired = paired;
    res.events.push_back(ev);
  }
  return res;
}

int count_in_band(const SweepResult& s, double g, int k) {
  int n = 0;
  for (const auto& r : s.rows)
    if (r.g == g && r.x > static_cast<double>(k) && r.x < static_cast<double>(k) + 1.0) ++n;
  return n;
}

} // namespace rabi
