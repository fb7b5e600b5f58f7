#pragma once
// Domain types and energy conventions. Everything internal works in the
// shifted energy x = E + g^2 (units hbar*omega = 1); E is recovered as x - g^2.

#include <cstdint>
#include <string>

namespace rabi {

enum class Parity { symmetric, antisymmetric };
enum class Method { diag, moroz, braak, birkhoff };

// Coupling g and half level splitting delta. A negative input delta is
// normalized to |delta| with parity_swapped set: flipping the sign of delta
// only exchanges the symmetric and anti-symmetric towers, so every formula
// downstream may assume delta >= 0 and the swap is applied to labels at the
// edges (see effective_parity / user_parity).
struct ModelParams {
  double g = 0.0;
  double delta = 0.0;
  bool parity_swapped = false;
};

// Validates finiteness and g >= 0, normalizes negative delta.
ModelParams make_params(double g, double delta);

// Demands g > 0 as well (recurrence-based methods divide by 2g).
void require_positive_g(const ModelParams& p, const char* who);

// Label in caller terms -> block actually computed (applies the delta<0 swap).
Parity effective_parity(Parity requested, const ModelParams& p);
// Block computed -> label in caller terms (same involution).
inline Parity user_parity(Parity internal, const ModelParams& p) { return effective_parity(internal, p); }

// +1 for the symmetric block, -1 for anti-symmetric (after swap normalization).
int parity_sigma(Parity requested, const ModelParams& p);

constexpr double to_energy(double x, double g) { return x - g * g; }
constexpr double to_shifted(double energy, double g) { return energy + g * g; }

// E_k = k - g^2; in shifted energy every baseline sits exactly at x = k.
double baseline_energy(int k, const ModelParams& p);

struct BaselineLabel {
  int k = 0;          // nearest non-negative integer to x
  double distance = 0.0;    // signed x - k
  bool separatrix = false;  // |x - k| == 0.5 exactly: label ambiguous
  bool below_range = false; // x < -0.5: no baseline below, k=0 reported with a warning
};

BaselineLabel nearest_baseline(double x);

// Bit flags carried by a level row. The CSV layer renders the first three;
// below_range only surfaces through logging.
enum LevelFlag : std::uint32_t {
  flag_unverified = 1u << 0,
  flag_spurious = 1u << 1,
  flag_separatrix_adjacent = 1u << 2,
};

struct LevelRecord {
  double x = 0.0;
  double energy = 0.0;
  double gauge_a = 0.0;         // signed per branch; x - k for branchless methods
  double oracle_residual = 0.0; // |x - nearest oracle level of the same parity|
  int k = 0;
  int solution_class = 1;
  Parity parity = Parity::symmetric;
  Method method = Method::diag;
  std::uint32_t flags = 0;
};

const char* to_string(Parity p);
const char* to_string(Method m);

} // namespace rabi
