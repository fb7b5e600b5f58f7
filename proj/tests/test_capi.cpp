#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#include "rabi.h"

namespace {

const rabi_params kP{0.7, 0.4};

const std::vector<double> kSym07 = {0.0629563, 1.1636038, 1.8507568, 3.0352310, 4.0569038, 4.8956291};
const std::vector<double> kAnti07 = {-0.2178051, 0.8609498, 2.1270104, 2.9566957, 3.9511267};

struct TableGuard {
  rabi_table* t = nullptr;
  ~TableGuard() { rabi_table_free(t); }
};

struct SweepGuard {
  rabi_sweep* s = nullptr;
  ~SweepGuard() { rabi_sweep_free(s); }
};

} // namespace

TEST_CASE("option defaults") {
  rabi_spectrum_opts o;
  std::memset(&o, 0x5a, sizeof o);
  rabi_spectrum_opts_init(&o);
  CHECK(o.method == RABI_METHOD_DIAG);
  CHECK(o.parity == RABI_PARITY_BOTH);
  CHECK(o.x_min == -1.0);
  CHECK(o.x_max == 5.0);
  CHECK(o.n == 0);
  CHECK(o.k == 0);
  CHECK(o.branch == RABI_BRANCH_PLUS);
  CHECK(o.has_choice == 0);
  CHECK(o.grid_step == 0.01);
  CHECK(o.cross_tol == 1e-3);
}

TEST_CASE("reference spectrum through the boundary") {
  rabi_spectrum_opts o;
  rabi_spectrum_opts_init(&o);
  TableGuard t;
  REQUIRE(rabi_spectrum(kP, &o, &t.t) == RABI_OK);
  REQUIRE(rabi_table_size(t.t) == kSym07.size() + kAnti07.size());

  std::size_t si = 0, ai = 0;
  double prev_x = -1e300;
  for (std::size_t i = 0; i < rabi_table_size(t.t); ++i) {
    rabi_level row;
    REQUIRE(rabi_table_get(t.t, i, &row) == RABI_OK);
    CHECK(row.x >= prev_x); // sorted ascending
    prev_x = row.x;
    CHECK(row.method == RABI_METHOD_DIAG);
    CHECK(row.flags == 0u);
    CHECK(std::abs(row.energy - (row.x - 0.49)) < 1e-12);
    if (row.parity == RABI_PARITY_SYM) {
      REQUIRE(si < kSym07.size());
      CHECK(std::abs(row.x - kSym07[si++]) < 1e-6);
    } else {
      REQUIRE(ai < kAnti07.size());
      CHECK(std::abs(row.x - kAnti07[ai++]) < 1e-6);
    }
  }
  CHECK(si == kSym07.size());
  CHECK(ai == kAnti07.size());
}

TEST_CASE("all-methods merge") {
  rabi_spectrum_opts o;
  rabi_spectrum_opts_init(&o);
  o.method = RABI_METHOD_ALL;
  TableGuard t;
  REQUIRE(rabi_spectrum(kP, &o, &t.t) == RABI_OK);

  int per_method[4] = {0, 0, 0, 0};
  int spurious = 0;
  for (std::size_t i = 0; i < rabi_table_size(t.t); ++i) {
    rabi_level row;
    REQUIRE(rabi_table_get(t.t, i, &row) == RABI_OK);
    if (row.flags & RABI_FLAG_SPURIOUS) {
      ++spurious;
      continue;
    }
    REQUIRE((row.method >= 0 && row.method <= 3));
    ++per_method[row.method];
  }
  const int expect = static_cast<int>(kSym07.size() + kAnti07.size());
  for (int m = 0; m < 4; ++m) CHECK(per_method[m] == expect);
  CHECK(spurious >= 1); // the stable truncated-coefficient artifact is kept, flagged
}

TEST_CASE("single-parity oracle slice") {
  TableGuard t;
  REQUIRE(rabi_oracle_spectrum(kP, RABI_PARITY_ANTI, 3, 0, &t.t) == RABI_OK);
  REQUIRE(rabi_table_size(t.t) == 3);
  rabi_level row;
  REQUIRE(rabi_table_get(t.t, 0, &row) == RABI_OK);
  CHECK(std::abs(row.x - kAnti07[0]) < 1e-6);
  CHECK(row.parity == RABI_PARITY_ANTI);

  TableGuard both;
  CHECK(rabi_oracle_spectrum(kP, RABI_PARITY_BOTH, 3, 0, &both.t) == RABI_ERR_BAD_ARG);
}

TEST_CASE("pointwise evaluation") {
  double v = 0.0;
  // the series functions vanish on the spectrum and are O(1) off it
  REQUIRE(rabi_eval(kP, RABI_FUNC_F0, kAnti07[0], 0, 0, 0, &v) == RABI_OK);
  CHECK(std::abs(v) < 1e-5);
  REQUIRE(rabi_eval(kP, RABI_FUNC_F0, 0.45, 0, 0, 0, &v) == RABI_OK);
  CHECK(std::abs(v) > 1e-3);
  REQUIRE(rabi_eval(kP, RABI_FUNC_GPLUS, kSym07[0], 0, 0, 0, &v) == RABI_OK);
  CHECK(std::abs(v) < 1e-5);
  REQUIRE(rabi_eval(kP, RABI_FUNC_GMINUS, kAnti07[1], 0, 0, 0, &v) == RABI_OK);
  CHECK(std::abs(v) < 1e-5);
  REQUIRE(rabi_eval(kP, RABI_FUNC_BN, -0.2178110, 9, 0, RABI_BRANCH_PLUS, &v) == RABI_OK);
  CHECK(std::abs(v) < 1e-4);

  // integer baselines are poles of the series functions
  CHECK(rabi_eval(kP, RABI_FUNC_F0, 1.0, 0, 0, 0, &v) == RABI_ERR_POLE);
  // ... but regular points of the Laurent coefficients
  CHECK(rabi_eval(kP, RABI_FUNC_BN, 1.0, 9, 0, RABI_BRANCH_PLUS, &v) == RABI_OK);

  CHECK(rabi_eval(kP, 99, 0.3, 0, 0, 0, &v) == RABI_ERR_BAD_ARG);
  CHECK(rabi_eval(rabi_params{0.0, 0.4}, RABI_FUNC_F0, 0.3, 0, 0, 0, &v) == RABI_ERR_DOMAIN);
}

TEST_CASE("classification fields") {
  rabi_class_info info;
  REQUIRE(rabi_classify(kP, 0.3, RABI_BRANCH_PLUS, &info) == RABI_OK);
  CHECK(info.k == 0);
  CHECK(std::abs(info.gauge_a - (-0.3)) < 1e-12); /* k - x on the plus branch */
  CHECK(info.solution_class == 1);
  CHECK(info.parity == RABI_PARITY_ANTI);
  CHECK(info.separatrix == 0);

  REQUIRE(rabi_classify(kP, 0.3, RABI_BRANCH_MINUS, &info) == RABI_OK);
  CHECK(std::abs(info.gauge_a - 0.3) < 1e-12);
  CHECK(info.parity == RABI_PARITY_SYM);

  REQUIRE(rabi_classify(kP, 1.5, RABI_BRANCH_PLUS, &info) == RABI_OK);
  CHECK(info.solution_class == 2);
  CHECK(info.separatrix == 1);
}

TEST_CASE("closed-form verification") {
  double resid = -1.0;
  REQUIRE(rabi_verify(kP, kAnti07[0], 0, RABI_BRANCH_PLUS, nullptr, 0, &resid) == RABI_OK);
  CHECK(resid >= 0.0);
  CHECK(resid < 1e-8);

  // half-integer gauge lands on the hypergeometric pole (separatrix)
  CHECK(rabi_verify(kP, -0.5, 0, RABI_BRANCH_PLUS, nullptr, 0, &resid) == RABI_ERR_KUMMER_POLE);
  // explicit sample list
  const double z[2] = {0.3, -0.3};
  REQUIRE(rabi_verify(kP, kAnti07[0], 0, RABI_BRANCH_PLUS, z, 2, &resid) == RABI_OK);
  CHECK(resid < 1e-8);
  CHECK(rabi_verify(kP, kAnti07[0], 0, RABI_BRANCH_PLUS, nullptr, 2, &resid) == RABI_ERR_BAD_ARG);
}

TEST_CASE("sweep accessors") {
  SweepGuard s;
  REQUIRE(rabi_sweep_run(0.2, 0.4, 3, 0.4, 3, 1e-2, &s.s) == RABI_OK);
  REQUIRE(rabi_sweep_rows(s.s) == 3u * 6u); // steps x (levels per parity x 2)

  double prev_g = 0.0;
  for (std::size_t i = 0; i < rabi_sweep_rows(s.s); ++i) {
    rabi_sweep_row row;
    REQUIRE(rabi_sweep_row_get(s.s, i, &row) == RABI_OK);
    CHECK(row.g >= prev_g);
    prev_g = row.g;
    CHECK(std::abs(row.gauge_a - (row.x - row.k)) < 1e-12);
    CHECK((row.parity == RABI_PARITY_SYM || row.parity == RABI_PARITY_ANTI));
  }

  rabi_sweep_row row;
  CHECK(rabi_sweep_row_get(s.s, rabi_sweep_rows(s.s), &row) == RABI_ERR_BAD_ARG);
  rabi_crossing c;
  CHECK(rabi_sweep_crossing_get(s.s, rabi_sweep_crossings(s.s), &c) == RABI_ERR_BAD_ARG);

  CHECK(rabi_sweep_run(0.4, 0.2, 3, 0.4, 3, 1e-2, &s.s) == RABI_ERR_BAD_ARG);
}

TEST_CASE("null and domain guards") {
  rabi_spectrum_opts o;
  rabi_spectrum_opts_init(&o);
  rabi_table* t = nullptr;
  CHECK(rabi_spectrum(kP, nullptr, &t) == RABI_ERR_BAD_ARG);
  CHECK(rabi_spectrum(kP, &o, nullptr) == RABI_ERR_BAD_ARG);
  CHECK(rabi_spectrum(rabi_params{-0.1, 0.4}, &o, &t) == RABI_ERR_DOMAIN);

  o.x_min = 3.0;
  o.x_max = -3.0;
  CHECK(rabi_spectrum(kP, &o, &t) == RABI_ERR_BAD_ARG);

  rabi_spectrum_opts moroz;
  rabi_spectrum_opts_init(&moroz);
  moroz.method = RABI_METHOD_MOROZ;
  CHECK(rabi_spectrum(rabi_params{0.0, 0.4}, &moroz, &t) == RABI_ERR_DOMAIN);

  rabi_level row;
  CHECK(rabi_table_get(nullptr, 0, &row) == RABI_ERR_BAD_ARG);
  CHECK(rabi_table_size(nullptr) == 0u);
  rabi_table_free(nullptr); // must be a safe no-op

  double v;
  CHECK(rabi_eval(kP, RABI_FUNC_F0, 0.3, 0, 0, 0, nullptr) == RABI_ERR_BAD_ARG);
  CHECK(rabi_classify(kP, 0.3, RABI_BRANCH_PLUS, nullptr) == RABI_ERR_BAD_ARG);
  CHECK(rabi_verify(kP, 0.3, 0, RABI_BRANCH_PLUS, nullptr, 0, nullptr) == RABI_ERR_BAD_ARG);
  CHECK(rabi_classify(kP, 0.3, 7, nullptr) == RABI_ERR_BAD_ARG);
  (void)v;
}

TEST_CASE("status strings and version") {
  for (int s = 0; s <= 7; ++s) {
    const char* msg = rabi_status_str(static_cast<rabi_status>(s));
    REQUIRE(msg != nullptr);
    CHECK(std::strlen(msg) > 0);
  }
  REQUIRE(rabi_status_str(static_cast<rabi_status>(99)) != nullptr);
  CHECK(std::strcmp(rabi_version(), "0.1.0") == 0);
}
