#pragma once

#include <string>

namespace rqnls::faults {

// Canned fault injections for the mutation-sensitivity harness. Each one
// perturbs exactly one site in the production code; the verify suite must
// flag every single one of them. Off (None) in normal operation.
enum class Mutation {
  None = 0,
  SquareConstraintSignFlip,  // resonance: +|j4|^2 instead of -|j4|^2
  DroppedConjugate,          // nonlinearity: u_{j2} instead of conj(u_{j2})
  BracketFactorHalf,         // momentum bracket: -1/2 instead of -1/3
  BrokenDealiasPad,          // lift: undersized y-padding, product aliases
  MorawetzKernelParity,      // Morawetz: even |sign| kernel instead of odd sign
};

Mutation active();
void set_active(Mutation m);

const char* name(Mutation m);
Mutation parse(const std::string& s);  // throws on unknown name

// RAII guard for tests and the mutation harness.
class Scoped {
 public:
  explicit Scoped(Mutation m) : prev_(active()) { set_active(m); }
  ~Scoped() { set_active(prev_); }
  Scoped(const Scoped&) = delete;
  Scoped& operator=(const Scoped&) = delete;

 private:
  Mutation prev_;
};

}  // namespace rqnls::faults
