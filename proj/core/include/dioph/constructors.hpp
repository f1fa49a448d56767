#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dioph/bigint.hpp"
#include "dioph/precision.hpp"
#include "dioph/real_source.hpp"

namespace dioph {

enum class PlanKind { Lambda1CF, Lambda1Series, VectorLamblemm, Veronese };

const char* to_string(PlanKind kind);
PlanKind parse_plan_kind(const std::string& name);

struct ConstructionPlan {
  PlanKind kind = PlanKind::Lambda1CF;
  unsigned k = 1;                 // Veronese dimension
  std::vector<Rational> lambdas;  // one entry, or one per coordinate for the vector plan
  Rational w = 1;                 // vector plan only
  std::size_t depth = 6;          // number of recorded jumps
  std::uint64_t salt = 0;         // 0 keeps every jump at its earliest admissible position
};

// One inserted large quotient h, placed right after the convergent with
// denominator s.
struct JumpRecord {
  std::size_t jump = 0;
  std::size_t coordinate = 1;
  std::size_t position = 0;  // index of h in the quotient sequence
  Integer h;
  Integer s;
  double target_ratio = 0;
  double realized_ratio = 0;
  double target_nu = 0;
  Rational realized_nu;  // certified lower bound on -log||s zeta|| / log s
};

struct ConstructionTrace {
  std::vector<JumpRecord> rows;
};

struct Construction {
  ConstructionPlan plan;
  std::vector<RealSource> sources;
  ConstructionTrace trace;
  // Quotient indices that received an inserted h, per coordinate.
  std::vector<std::vector<std::size_t>> designated;
};

void validate_plan(const ConstructionPlan& plan);

Construction construct(const ConstructionPlan& plan, unsigned budget = default_precision_budget());

}  // namespace dioph
