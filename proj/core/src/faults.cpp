#include "rqnls/faults.hpp"

#include <atomic>
#include <stdexcept>

namespace rqnls::faults {

namespace {
std::atomic<Mutation> g_active{Mutation::None};
}

Mutation active() { return g_active.load(std::memory_order_relaxed); }
void set_active(Mutation m) { g_active.store(m, std::memory_order_relaxed); }

const char* name(Mutation m) {
  switch (m) {
    case Mutation::None: return "none";
    case Mutation::SquareConstraintSignFlip: return "square-constraint-sign-flip";
    case Mutation::DroppedConjugate: return "dropped-conjugate";
    case Mutation::BracketFactorHalf: return "bracket-factor-half";
    case Mutation::BrokenDealiasPad: return "broken-dealias-pad";
    case Mutation::MorawetzKernelParity: return "morawetz-kernel-parity";
  }
  return "none";
}

Mutation parse(const std::string& s) {
  for (Mutation m : {Mutation::None, Mutation::SquareConstraintSignFlip,
                     Mutation::DroppedConjugate, Mutation::BracketFactorHalf,
                     Mutation::BrokenDealiasPad, Mutation::MorawetzKernelParity})
    if (s == name(m)) return m;
  throw std::invalid_argument("unknown mutation name: " + s);
}

}  // namespace rqnls::faults
