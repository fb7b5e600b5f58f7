#pragma once
// Error taxonomy shared by all modules. Core code throws rabi::Error; the C
// boundary maps codes 1:1 onto rabi_status values.

#include <stdexcept>
#include <string>

namespace rabi {

enum class Errc {
  ok = 0,
  domain,           // parameter outside the mathematical domain (g < 0, ...)
  pole_at_baseline, // evaluation within pole_guard of an integer x
  non_converged,    // truncation/doubling or series cap exhausted
  underflow,        // rescaling collapsed to zero
  kummer_pole,      // confluent-hypergeometric b-parameter at a non-positive integer
  lost_bracket,     // root bracket hit a pole mid-refinement
  bad_argument,     // malformed request (counts, enums, ranges)
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace rabi
