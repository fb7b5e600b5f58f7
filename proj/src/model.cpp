#include "rabi/model.hpp"

#include <cmath>

#include "rabi/errors.hpp"

namespace rabi {

ModelParams make_params(double g, double delta) {
  if (!std::isfinite(g) || !std::isfinite(delta))
    raise(Errc::domain, "model parameters must be finite");
  if (g < 0.0) raise(Errc::domain, "coupling g must be non-negative");
  ModelParams p;
  p.g = g;
  if (delta < 0.0) {
    // A sign change of delta swaps the symmetric and anti-symmetric towers;
    // record the swap instead of threading the sign through every formula.
    p.delta = -delta;
    p.parity_swapped = true;
  } else {
    p.delta = delta;
  }
  return p;
}

void require_positive_g(const ModelParams& p, const char* who) {
  if (p.g <= 0.0) raise(Errc::domain, std::string(who) + " requires g > 0");
}

Parity effective_parity(Parity requested, const ModelParams& p) {
  if (!p.parity_swapped) return requested;
  return requested == Parity::symmetric ? Parity::antisymmetric : Parity::symmetric;
}

int parity_sigma(Parity requested, const ModelParams& p) {
  return effective_parity(requested, p) == Parity::symmetric ? +1 : -1;
}

double baseline_energy(int k, const ModelParams& p) {
  if (k < 0) raise(Errc::bad_argument, "baseline index k must be non-negative");
  return static_cast<double>(k) - p.g * p.g;
}

BaselineLabel nearest_baseline(double x) {
  if (!std::isfinite(x)) raise(Errc::bad_argument, "nearest_baseline: x must be finite");
  BaselineLabel out;
  long k = std::lround(x);
  if (k < 0) k = 0;
  out.k = static_cast<int>(k);
  out.distance = x - static_cast<double>(k);
  // Exactly halfway between baselines the label is ambiguous.
  out.separatrix = std::abs(std::abs(out.distance) - 0.5) < 1e-12;
  out.below_range = out.distance < -0.5;
  return out;
}

const char* to_string(Parity p) {
  return p == Parity::symmetric ? "sym" : "anti";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::diag: return "diag";
    case Method::moroz: return "moroz";
    case Method::braak: return "braak";
    case Method::birkhoff: return "birkhoff";
  }
  return "?";
}

} // namespace rabi
