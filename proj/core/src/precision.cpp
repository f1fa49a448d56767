#include "dioph/precision.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "dioph/error.hpp"

namespace dioph {

namespace {

std::atomic<unsigned> budget_override{0};

}  // namespace

unsigned default_precision_budget() {
  if (unsigned v = budget_override.load(std::memory_order_relaxed)) return v;
  static const unsigned budget = [] {
    unsigned value = 4096;
    if (const char* env = std::getenv("DIOPH_PRECISION_BUDGET")) {
      try {
        unsigned long parsed = std::stoul(env);
        if (parsed >= 64 && parsed <= kMaxPrecisionBudget) value = static_cast<unsigned>(parsed);
      } catch (const std::exception&) {
      }
    }
    return value;
  }();
  return budget;
}

void set_default_precision_budget(unsigned bits) {
  if (bits != 0 && (bits < 64 || bits > kMaxPrecisionBudget)) {
    throw InvalidArgument("precision budget must lie in [64, 2^24] bits");
  }
  budget_override.store(bits, std::memory_order_relaxed);
}

}  // namespace dioph
