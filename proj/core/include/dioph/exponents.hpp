#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dioph/bigint.hpp"
#include "dioph/certified.hpp"
#include "dioph/distance_kernel.hpp"
#include "dioph/precision.hpp"
#include "dioph/real_source.hpp"

namespace dioph {

enum class ExponentName { Lambda1, LambdaK, OmegaK, ChiK, UniformChiK };
enum class WitnessMode { SharedDenominator, PerCoordinate };
enum class SearchMethod { BruteForce, ConvergentCandidates, Both };

const char* to_string(ExponentName name);
const char* to_string(WitnessMode mode);
const char* to_string(SearchMethod method);

// Certified lower bound on -log(max error) / log(window); unbounded when
// every error is exactly zero.
struct AchievedExponent {
  bool unbounded = false;
  Rational lower;

  double approx() const;
  bool operator<(const AchievedExponent& other) const;
};

struct WitnessRecord {
  WitnessMode mode = WitnessMode::SharedDenominator;
  Integer window;
  std::vector<Integer> denominators;  // x (shared) or x_1..x_k
  std::vector<Integer> numerators;    // y_1..y_k
  // Enclosures of ||x_j zeta_j||; for transformed witnesses [0, chained bound].
  std::vector<DistanceInterval> errors;
  AchievedExponent achieved;
  bool transformed = false;
  bool vacuous = false;  // transformed exponent is not positive

  Rational max_error_upper() const;
  Rational max_error_lower() const;
};

struct WindowResult {
  Integer window;
  std::optional<WitnessRecord> witness;
  std::string route;  // exhaustive, candidates or both
  std::string flag;   // reason the window was skipped
};

// One convergent index of the single-number profile.
struct ProfileEntry {
  std::size_t index = 0;
  Integer q;       // s_n
  Integer q_next;  // s_{n+1}
  Integer a_next;  // a_{n+1}
  RationalInterval nu;
  RationalInterval eta;
  RationalInterval tau;
  bool gap_positive = false;   // q_next > a_next * q, i.e. eta > tau
  bool gap_bounded = false;    // q_next <= (27/10) a_next q, so eta - tau <= 1/log q
};

struct ExponentEstimate {
  ExponentName name = ExponentName::OmegaK;
  std::size_t k = 1;
  std::vector<WindowResult> windows;
  AchievedExponent empirical;  // maximum over windows
  AchievedExponent tail;       // at the largest window with a witness
  std::vector<ProfileEntry> profile;
  bool truncated = false;
};

struct WindowSchedule {
  std::vector<Integer> windows;  // sorted, distinct, each >= 2
};

struct EstimateOptions {
  unsigned budget = default_precision_budget();
  unsigned threads = 1;
  unsigned long exhaustive_limit = 1000000;  // shared-denominator exhaustive range
  unsigned multiples = 64;                   // candidate multiples of each convergent
  double brute_force_guard = 1e8;            // on X_max^k for per-coordinate search
  unsigned relative_bits = 64;               // precision of reported errors
};

WindowSchedule geometric_schedule(const Integer& start, const Integer& x_max, const Rational& ratio);
WindowSchedule merge_schedules(const WindowSchedule& a, const WindowSchedule& b);
// Ratio-2 windows from 8 plus convergent denominators of each source; when
// power_base is given, also the j-th powers (j <= k) of its denominators.
WindowSchedule default_schedule(std::span<const RealSource> sources, const Integer& x_max,
                                unsigned budget = default_precision_budget(),
                                const RealSource* power_base = nullptr, unsigned k = 0);
// Ratio-5/4 windows plus s - 1 and s for every convergent denominator s.
WindowSchedule dense_schedule(std::span<const RealSource> sources, const Integer& x_max,
                              unsigned budget = default_precision_budget());

// nu_n, eta_n, tau_n over `depth` convergent indices with s_n >= 2.
ExponentEstimate lambda1_profile(const RealSource& source, std::size_t depth,
                                 const EstimateOptions& options = {});

ExponentEstimate estimate_omega_k(std::span<const RealSource> sources, const WindowSchedule& schedule,
                                  const EstimateOptions& options = {});

// omega_k of (zeta, zeta^2, ..., zeta^k).
ExponentEstimate estimate_lambda_k(const RealSource& base, unsigned k, const WindowSchedule& schedule,
                                   const EstimateOptions& options = {});

ExponentEstimate estimate_chi_k(std::span<const RealSource> sources, const WindowSchedule& schedule,
                                SearchMethod method, const EstimateOptions& options = {});

std::vector<RealSource> veronese_sources(const RealSource& base, unsigned k);

// Shared-denominator witness x = x_1 ... x_k at window Q^k, with chained
// error bounds (prod_{i != j} x_i) ||x_j zeta_j|| re-verified from fresh
// enclosures and exponent (nu - k + 1) / k.
WitnessRecord chi_witness_to_omega_witness(const WitnessRecord& witness,
                                           std::span<const RealSource> sources,
                                           const EstimateOptions& options = {});

// Re-derives every error from fresh enclosures and checks the stored
// exponent; throws VerificationFailure on mismatch.
void verify_witness(const WitnessRecord& witness, std::span<const RealSource> sources,
                    unsigned budget = default_precision_budget());

struct SandwichViolation {
  Integer window;
  std::string relation;
  std::string detail;
};

struct SandwichReport {
  std::size_t windows_checked = 0;
  std::vector<SandwichViolation> violations;
  std::size_t transforms_verified = 0;
  std::size_t transforms_vacuous = 0;
  bool vacuous = false;  // some exponent is unbounded, so the chain says nothing
  std::optional<Rational> veronese_floor;  // (lambda_1 - k + 1) / k
  std::vector<WitnessRecord> transformed;
};

// Checks omega_k <= chi_k <= lambda_1(zeta_j) window by window and re-verifies
// the transform of every chi witness. per_coordinate holds one k = 1 estimate
// per source over the same schedule.
SandwichReport sandwich_report(std::span<const RealSource> sources, const ExponentEstimate& omega,
                               const ExponentEstimate& chi,
                               std::span<const ExponentEstimate> per_coordinate,
                               const EstimateOptions& options = {},
                               std::optional<Rational> lambda1_value = std::nullopt);

struct UniformChiReport {
  std::vector<WindowResult> windows;
  Integer worst_window;
  AchievedExponent worst;
  bool pass = true;  // every window reaches 1 - 1/log X
};

UniformChiReport uniform_chi_check(std::span<const RealSource> sources, const Integer& x_max,
                                   const EstimateOptions& options = {});

}  // namespace dioph
