#pragma once
// Assembly layer: turns method choices into LevelRecord tables (spectrum
// computation with oracle cross-checks and spurious filtering), tabulates
// functions for plotting, and tracks the oracle spectrum along a coupling
// sweep with baseline-crossing detection.

#include <optional>
#include <vector>

#include "rabi/birkhoff.hpp"
#include "rabi/model.hpp"
#include "rabi/rootfind.hpp"
#include "rabi/tridiag.hpp"

namespace rabi {

struct SpectrumRequest {
  ModelParams params;
  Method method = Method::diag;
  bool want_sym = true;
  bool want_anti = true;
  double x_min = -1.0;
  double x_max = 5.0;
  int n = 0;                            // per-method truncation; 0 = default
  std::optional<IndicialChoice> choice; // birkhoff only; default k=0 and k=1 on rho_plus
  double grid_step = 0.01;
  double cross_tol = 1e-3;
};

struct SpectrumTable {
  std::vector<LevelRecord> rows; // sorted by x, then parity
  bool any_spurious = false;
};

SpectrumTable compute_spectrum(const SpectrumRequest& req);

// Defaults per method: diag/moroz/braak/birkhoff.
int default_truncation(Method m);

// Deterministic presentation order: by x, then parity, then method.
void sort_level_rows(std::vector<LevelRecord>& rows);

enum class ScanFunction { f0, gplus, gminus, bn };

struct ScanRequest {
  ModelParams params;
  ScanFunction function = ScanFunction::f0;
  double x_min = -1.0;
  double x_max = 5.0;
  double grid_step = 0.01;
  double pole_exclusion = 0.01;
  int n = 0; // truncation; 0 = default (60 for series, 12 for bn)
  IndicialChoice choice; // bn only
};

struct ScanSample {
  double x = 0.0;
  double value = 0.0; // NaN inside a pole gap
  bool pole = false;
};

std::vector<ScanSample> tabulate(const ScanRequest& req);

struct SweepRequest {
  double g_min = 0.1;
  double g_max = 1.2;
  int steps = 50;
  double delta = 0.4;
  int levels = 6; // per parity
  double crossing_tol = 1e-2;
};

struct SweepRow {
  double g = 0.0;
  double x = 0.0;
  Parity parity = Parity::symmetric;
  int k = 0;
  double gauge_a = 0.0; // x - k
};

// One crossing event per level whose baseline distance changes sign between
// adjacent sweep steps with an unchanged k label. `paired` marks events where
// opposite-parity partners flip at the same baseline in the same interval and
// the interpolated minimum gap is below crossing_tol (degenerate crossing).
struct CrossingEvent {
  double g_lo = 0.0, g_hi = 0.0;
  int k = 0;
  Parity parity = Parity::symmetric; // of the flipping level (ignored when paired)
  bool paired = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;          // per step, per level, sorted by (g, x)
  std::vector<CrossingEvent> events;
  std::vector<double> grid;            // the g values
};

SweepResult run_sweep(const SweepRequest& req);

// Count of rows at one sweep step with x in the open interval (k, k+1).
int count_in_band(const SweepResult& s, double g, int k);

} // namespace rabi
