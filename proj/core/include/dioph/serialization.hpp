#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dioph/constructors.hpp"
#include "dioph/continued_fraction.hpp"
#include "dioph/exponents.hpp"
#include "dioph/polynomial.hpp"
#include "dioph/real_source.hpp"
#include "dioph/variety.hpp"

// JSON and CSV forms of the library types. Big integers and rationals are
// written as decimal strings ("a" or "a/b").
namespace dioph {

std::string plan_to_json(const ConstructionPlan& plan);
ConstructionPlan plan_from_json(const std::string& text);
// Provenance attached to coordinate j (1-based) of a construction.
std::string plan_provenance_json(const ConstructionPlan& plan, std::size_t coordinate);

// Lazy sources are written with at least min_terms materialized terms plus
// their provenance, from which they are regenerated and checked on reading.
std::string source_to_json(const RealSource& source, std::size_t min_terms = 0);
RealSource source_from_json(const std::string& text);

std::string convergents_to_json(const ConvergentList& list);
ConvergentList convergents_from_json(const std::string& text);

std::string witness_to_json(const WitnessRecord& witness);
WitnessRecord witness_from_json(const std::string& text);

struct EstimateArtifact {
  std::vector<RealSource> sources;
  ExponentEstimate estimate;
};

std::string estimate_to_json(const ExponentEstimate& estimate, std::span<const RealSource> sources = {},
                             std::size_t source_terms = 0);
EstimateArtifact estimate_from_json(const std::string& text);
// window,best_exponent for every window with a witness.
std::string estimate_to_csv(const ExponentEstimate& estimate);

std::string trace_to_csv(const ConstructionTrace& trace);
std::string construction_to_json(const Construction& construction, std::size_t source_terms);

std::string polynomial_to_json(const MultiPolynomial& p);
MultiPolynomial polynomial_from_json(const std::string& text);

struct ScanArtifact {
  MultiPolynomial polynomial{1};
  Box box;
  RationalPointSet points;
  ScanReport report;
};

std::string scan_to_json(const ScanReport& report, const MultiPolynomial& p, const Box& box,
                         const RationalPointSet& points);
ScanArtifact scan_from_json(const std::string& text);
// x, y_1..y_k, |P|, classification, nearest rational point, distance.
std::string scan_to_csv(const ScanReport& report, const RationalPointSet& points);

std::string sandwich_to_json(const SandwichReport& report);
std::string uniform_chi_to_json(const UniformChiReport& report);

}  // namespace dioph
