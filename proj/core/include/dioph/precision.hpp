#pragma once

namespace dioph {

// Default working precision, in bits, for a single enclosure request.
inline constexpr unsigned kDefaultPrecision = 64;
inline constexpr unsigned kMaxPrecisionBudget = 1u << 24;

// Upper limit on the working precision any refinement loop may reach.
// Read once from DIOPH_PRECISION_BUDGET when set, otherwise 4096 bits.
unsigned default_precision_budget();

// Process-wide override of the default budget; 0 restores the default.
void set_default_precision_budget(unsigned bits);

}  // namespace dioph
