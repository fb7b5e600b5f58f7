// C boundary: translates between the POD/handle surface of rabi.h and the
// C++ core. All exceptions are caught here and mapped onto status codes;
// nothing throws across the ABI.

#include "rabi.h"

#include <cmath>
#include <new>
#include <vector>

#include "rabi/birkhoff.hpp"
#include "rabi/errors.hpp"
#include "rabi/model.hpp"
#include "rabi/pipeline.hpp"
#include "rabi/recurrence.hpp"
#include "rabi/tridiag.hpp"

using namespace rabi;

struct rabi_table {
  std::vector<rabi_level> rows;
};

struct rabi_sweep {
  std::vector<rabi_sweep_row> rows;
  std::vector<rabi_crossing> crossings;
};

namespace {

rabi_status map_error(const Error& e) {
  switch (e.code()) {
    case Errc::ok: return RABI_OK;
    case Errc::domain: return RABI_ERR_DOMAIN;
    case Errc::pole_at_baseline: return RABI_ERR_POLE;
    case Errc::non_converged: return RABI_ERR_NONCONVERGED;
    case Errc::underflow: return RABI_ERR_UNDERFLOW;
    case Errc::kummer_pole: return RABI_ERR_KUMMER_POLE;
    case Errc::lost_bracket: return RABI_ERR_LOST_BRACKET;
    case Errc::bad_argument: return RABI_ERR_BAD_ARG;
  }
  return RABI_ERR_BAD_ARG;
}

template <typename Fn>
rabi_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return map_error(e);
  } catch (const std::bad_alloc&) {
    return RABI_ERR_NONCONVERGED;
  } catch (...) {
    return RABI_ERR_BAD_ARG;
  }
}

int parity_to_c(Parity p) { return p == Parity::symmetric ? RABI_PARITY_SYM : RABI_PARITY_ANTI; }

int method_to_c(Method m) {
  switch (m) {
    case Method::diag: return RABI_METHOD_DIAG;
    case Method::moroz: return RABI_METHOD_MOROZ;
    case Method::braak: return RABI_METHOD_BRAAK;
    case Method::birkhoff: return RABI_METHOD_BIRKHOFF;
  }
  return RABI_METHOD_DIAG;
}

rabi_level level_to_c(const LevelRecord& r) {
  rabi_level out;
  out.x = r.x;
  out.energy = r.energy;
  out.gauge_a = r.gauge_a;
  out.oracle_residual = r.oracle_residual;
  out.k = r.k;
  out.solution_class = r.solution_class;
  out.parity = parity_to_c(r.parity);
  out.method = method_to_c(r.method);
  out.flags = r.flags;
  return out;
}

Branch branch_from_c(int b) {
  if (b == RABI_BRANCH_PLUS) return Branch::rho_plus;
  if (b == RABI_BRANCH_MINUS) return Branch::rho_minus;
  raise(Errc::bad_argument, "invalid branch value");
}

} // namespace

extern "C" {

size_t rabi_table_size(const rabi_table* t) { return t ? t->rows.size() : 0; }

rabi_status rabi_table_get(const rabi_table* t, size_t i, rabi_level* out) {
  if (!t || !out) return RABI_ERR_BAD_ARG;
  if (i >= t->rows.size()) return RABI_ERR_BAD_ARG;
  *out = t->rows[i];
  return RABI_OK;
}

void rabi_table_free(rabi_table* t) { delete t; }

void rabi_spectrum_opts_init(rabi_spectrum_opts* opts) {
  if (!opts) return;
  opts->method = RABI_METHOD_DIAG;
  opts->parity = RABI_PARITY_BOTH;
  opts->x_min = -1.0;
  opts->x_max = 5.0;
  opts->n = 0;
  opts->k = 0;
  opts->branch = RABI_BRANCH_PLUS;
  opts->has_choice = 0;
  opts->grid_step = 0.01;
  opts->cross_tol = 1e-3;
}

rabi_status rabi_spectrum(rabi_params params, const rabi_spectrum_opts* opts, rabi_table** out) {
  if (!opts || !out) return RABI_ERR_BAD_ARG;
  *out = nullptr;
  return guarded([&]() -> rabi_status {
    const ModelParams p = make_params(params.g, params.delta);
    SpectrumRequest req;
    req.params = p;
    req.want_sym = opts->parity == RABI_PARITY_SYM || opts->parity == RABI_PARITY_BOTH;
    req.want_anti = opts->parity == RABI_PARITY_ANTI || opts->parity == RABI_PARITY_BOTH;
    if (opts->parity < 0 || opts->parity > RABI_PARITY_BOTH)
      raise(Errc::bad_argument, "invalid parity value");
    req.x_min = opts->x_min;
    req.x_max = opts->x_max;
    req.n = opts->n;
    req.grid_step = opts->grid_step;
    req.cross_tol = opts->cross_tol;
    if (opts->has_choice) req.choice = IndicialChoice{branch_from_c(opts->branch), opts->k};

    std::vector<Method> methods;
    switch (opts->method) {
      case RABI_METHOD_DIAG: methods = {Method::diag}; break;
      case RABI_METHOD_MOROZ: methods = {Method::moroz}; break;
      case RABI_METHOD_BRAAK: methods = {Method::braak}; break;
      case RABI_METHOD_BIRKHOFF: methods = {Method::birkhoff}; break;
      case RABI_METHOD_ALL: methods = {Method::diag, Method::moroz, Method::braak, Method::birkhoff}; break;
      default: raise(Errc::bad_argument, "invalid method value");
    }
    std::vector<LevelRecord> rows;
    for (Method m : methods) {
      req.method = m;
      SpectrumTable t = compute_spectrum(req);
      rows.insert(rows.end(), t.rows.begin(), t.rows.end());
    }
    sort_level_rows(rows);
    auto* table = new rabi_table;
    table->rows.reserve(rows.size());
    for (const auto& r : rows) table->rows.push_back(level_to_c(r));
    *out = table;
    return RABI_OK;
  });
}

rabi_status rabi_oracle_spectrum(rabi_params params, int parity, int count, int n_trunc,
                                 rabi_table** out) {
  if (!out) return RABI_ERR_BAD_ARG;
  *out = nullptr;
  return guarded([&]() -> rabi_status {
    if (parity != RABI_PARITY_SYM && parity != RABI_PARITY_ANTI)
      raise(Errc::bad_argument, "oracle spectrum needs a single parity");
    const ModelParams p = make_params(params.g, params.delta);
    const Parity par = parity == RABI_PARITY_SYM ? Parity::symmetric : Parity::antisymmetric;
    const SpectrumSlice s = oracle_spectrum(p, par, count, n_trunc);
    auto* table = new rabi_table;
    for (double x : s.xs) {
      LevelRecord rec;
      rec.x = x;
      rec.energy = to_energy(x, p.g);
      rec.parity = par;
      rec.method = Method::diag;
      const BaselineLabel lbl = nearest_baseline(x);
      rec.k = lbl.k;
      rec.gauge_a = lbl.distance;
      rec.solution_class = classify_solution(x, {Branch::rho_plus, lbl.k}, p);
      table->rows.push_back(level_to_c(rec));
    }
    *out = table;
    return RABI_OK;
  });
}

rabi_status rabi_eval(rabi_params params, int function, double x, int n, int k, int branch,
                      double* out) {
  if (!out) return RABI_ERR_BAD_ARG;
  return guarded([&]() -> rabi_status {
    const ModelParams p = make_params(params.g, params.delta);
    switch (function) {
      case RABI_FUNC_F0:
        *out = moroz_f0(x, p, n > 0 ? n : 60);
        return RABI_OK;
      case RABI_FUNC_GPLUS:
        *out = braak_g(x, Parity::symmetric, p, n > 0 ? n : 60);
        return RABI_OK;
      case RABI_FUNC_GMINUS:
        *out = braak_g(x, Parity::antisymmetric, p, n > 0 ? n : 60);
        return RABI_OK;
      case RABI_FUNC_BN:
        *out = leapfrog_bn(x, {branch_from_c(branch), k}, p, n > 0 ? n : 12);
        return RABI_OK;
      default:
        raise(Errc::bad_argument, "invalid function value");
    }
  });
}

rabi_status rabi_classify(rabi_params params, double x, int branch, rabi_class_info* out) {
  if (!out) return RABI_ERR_BAD_ARG;
  return guarded([&]() -> rabi_status {
    const ModelParams p = make_params(params.g, params.delta);
    const Branch br = branch_from_c(branch);
    const BaselineLabel lbl = nearest_baseline(x);
    const IndicialChoice choice{br, lbl.k};
    out->k = lbl.k;
    out->gauge_a = branch_gauge(x, choice);
    out->solution_class = classify_solution(x, choice, p);
    out->parity = parity_to_c(user_parity(parity_of(choice), p));
    out->separatrix = (lbl.separatrix || std::abs(std::abs(lbl.distance) - 0.5) < 1e-6) ? 1 : 0;
    return RABI_OK;
  });
}

rabi_status rabi_verify(rabi_params params, double x, int k, int branch, const double* z_samples,
                        size_t n_samples, double* residual) {
  if (!residual) return RABI_ERR_BAD_ARG;
  if (!z_samples && n_samples > 0) return RABI_ERR_BAD_ARG;
  return guarded([&]() -> rabi_status {
    const ModelParams p = make_params(params.g, params.delta);
    std::vector<double> zs;
    if (n_samples == 0)
      zs = {0.25, -0.25, 0.5, -0.5, 1.0, -1.0};
    else
      zs.assign(z_samples, z_samples + n_samples);
    *residual = eigenfunction_parity_check(x, {branch_from_c(branch), k}, p, zs);
    return RABI_OK;
  });
}

rabi_status rabi_sweep_run(double g_min, double g_max, int steps, double delta, int levels,
                           double crossing_tol, rabi_sweep** out) {
  if (!out) return RABI_ERR_BAD_ARG;
  *out = nullptr;
  return guarded([&]() -> rabi_status {
    SweepRequest req;
    req.g_min = g_min;
    req.g_max = g_max;
    req.steps = steps;
    req.delta = delta;
    req.levels = levels;
    if (crossing_tol > 0.0) req.crossing_tol = crossing_tol;
    const SweepResult res = run_sweep(req);
    auto* s = new rabi_sweep;
    s->rows.reserve(res.rows.size());
    for (const auto& r : res.rows)
      s->rows.push_back({r.g, r.x, parity_to_c(r.parity), r.k, r.gauge_a});
    for (const auto& e : res.events)
      s->crossings.push_back({e.g_lo, e.g_hi, e.k, parity_to_c(e.parity), e.paired ? 1 : 0});
    *out = s;
    return RABI_OK;
  });
}

size_t rabi_sweep_rows(const rabi_sweep* s) { return s ? s->rows.size() : 0; }

rabi_status rabi_sweep_row_get(const rabi_sweep* s, size_t i, rabi_sweep_row* out) {
  if (!s || !out || i >= s->rows.size()) return RABI_ERR_BAD_ARG;
  *out = s->rows[i];
  return RABI_OK;
}

size_t rabi_sweep_crossings(const rabi_sweep* s) { return s ? s->crossings.size() : 0; }

rabi_status rabi_sweep_crossing_get(const rabi_sweep* s, size_t i, rabi_crossing* out) {
  if (!s || !out || i >= s->crossings.size()) return RABI_ERR_BAD_ARG;
  *out = s->crossings[i];
  return RABI_OK;
}

void rabi_sweep_free(rabi_sweep* s) { delete s; }

const char* rabi_status_str(rabi_status s) {
  switch (s) {
    case RABI_OK: return "ok";
    case RABI_ERR_DOMAIN: return "parameter outside mathematical domain";
    case RABI_ERR_POLE: return "evaluation at an integer-baseline pole";
    case RABI_ERR_NONCONVERGED: return "truncation or series cap exhausted";
    case RABI_ERR_UNDERFLOW: return "rescaling collapsed to zero";
    case RABI_ERR_KUMMER_POLE: return "hypergeometric parameter at a non-positive integer";
    case RABI_ERR_LOST_BRACKET: return "root bracket hit a pole mid-refinement";
    case RABI_ERR_BAD_ARG: return "malformed request";
  }
  return "unknown status";
}

const char* rabi_version(void) { return "0.1.0"; }

} // extern "C"
