#pragma once

#include "mtra/assignment.hpp"
#include "mtra/instance.hpp"
#include "mtra/mechanisms.hpp"
#include "mtra/preferences.hpp"
#include "mtra/rational.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mtra {

struct SdVerdict {
  bool p_dominates_q = false;
  bool q_dominates_p = false;
  // slack[x] = UCS-sum of p at x minus UCS-sum of q at x.
  std::vector<Rational> slack;

  bool mutual() const { return p_dominates_q && q_dominates_p; }
};

// Stochastic dominance of row p over row q (and conversely) under `order`.
SdVerdict sd_compare(const PartialOrder& order, std::span<const Rational> p, std::span<const Rational> q);

// Sum of row[y] over y in UCS(order, x), for every x.
std::vector<Rational> upper_contour_sums(const PartialOrder& order, std::span<const Rational> row);

// (better, worse): some agent prefers `better` yet holds a positive share of
// `worse`. `agent` is the least such agent.
struct ImprovableTuple {
  BundleIndex better;
  BundleIndex worse;
  AgentIndex agent;

  bool operator==(const ImprovableTuple&) const = default;
};

// One tuple per bundle pair, sorted by (better, worse).
std::vector<ImprovableTuple> improvable_tuples(const Instance& instance, const FractionalAssignment& assignment);

// Largest subset of the improvable tuples in which every item of a left
// bundle occurs in some right bundle; nullopt when that subset is empty.
std::optional<std::vector<ImprovableTuple>> find_generalized_cycle(const Instance& instance,
                                                                   const FractionalAssignment& assignment);

enum class Property {
  SdEfficiency,
  ExPostEfficiency,
  OrdinalFairness,
  SdEnvyFreeness,
  WeakSdEnvyFreeness,
  EqualTreatment,
  UpperInvariance,
  SdStrategyproofness,
  WeakSdStrategyproofness,
  Decomposability,
};

std::string_view property_name(Property property);
std::optional<Property> parse_property(std::string_view name);
const std::vector<Property>& all_properties();
// Needs a mechanism rather than a single assignment.
bool is_mechanism_property(Property property);

// Witnesses. Each one can be re-checked without the oracle that found it.
struct DominatingAssignment {
  FractionalAssignment assignment;
};

struct AgentPair {
  AgentIndex agent;
  AgentIndex other;
};

struct FairnessViolation {
  BundleIndex bundle;
  AgentIndex agent;  // holds a positive share of `bundle`
  AgentIndex other;
};

// For every candidate discrete assignment A, sum_j weights[j][A(j)] >= 0,
// while sum_{j,x} weights[j][x] * P[j][x] < 0. Weights are agent-major.
struct InfeasibilityCertificate {
  std::size_t agents = 0;
  std::size_t bundles = 0;
  std::vector<Rational> weights;

  const Rational& at(AgentIndex j, BundleIndex x) const { return weights[j * bundles + x]; }
};

struct Misreport {
  AgentIndex agent;
  AgentPreference report;
  std::size_t tiebreak_set;  // index into the tiebreak sets that were checked
  FractionalAssignment truthful;
  FractionalAssignment misreported;
};

struct InvarianceViolation {
  AgentIndex agent;
  AgentPreference report;
  BundleIndex pivot;
  std::vector<BundleIndex> removed;
  std::size_t tiebreak_set;
  FractionalAssignment truthful;
  FractionalAssignment transformed;
};

using Witness = std::variant<DominatingAssignment, AgentPair, FairnessViolation, Lottery, InfeasibilityCertificate,
                             Misreport, InvarianceViolation>;

struct PropertyReport {
  Property property;
  bool pass = false;
  std::optional<Witness> witness;  // always set on failure
  std::size_t cases_checked = 0;
  std::string detail;
};

// Pass iff no assignment Q other than P sd-dominates P for every agent.
PropertyReport check_sd_efficiency(const Instance& instance, const FractionalAssignment& assignment);

enum class EnvyStrength { Strong, Weak };
PropertyReport check_envy(const Instance& instance, const FractionalAssignment& assignment, EnvyStrength strength);

PropertyReport check_ete(const Instance& instance, const FractionalAssignment& assignment);
PropertyReport check_ordinal_fairness(const Instance& instance, const FractionalAssignment& assignment);

// Enumerates all (n!)^p discrete assignments, so both throw
// InstanceTooLargeToDecide beyond kMaxDecidableAssignments.
inline constexpr std::size_t kMaxDecidableAssignments = 576;
PropertyReport check_decomposability(const Instance& instance, const FractionalAssignment& assignment);
PropertyReport check_ex_post_efficiency(const Instance& instance, const FractionalAssignment& assignment);

// Re-checks a Farkas certificate against the given candidate assignments.
bool certifies_infeasibility(const InfeasibilityCertificate& certificate, const FractionalAssignment& assignment,
                             std::span<const DiscreteAssignment> candidates);

// Default tiebreak sets for mechanism checks: canonical and reversed
// canonical, each applied to every agent.
std::vector<Tiebreaks> default_tiebreak_sets(const Instance& instance);

inline constexpr std::size_t kMaxLinearOrderBundles = 4;
inline constexpr std::size_t kMaxMisreportsPerAgent = 20000;

struct MisreportSpace {
  enum class Kind { LinearOrders, CpNets, IndependentCpNets, Explicit };
  Kind kind = Kind::LinearOrders;
  std::vector<std::pair<AgentIndex, AgentPreference>> reports;  // Explicit

  static MisreportSpace linear_orders() { return {Kind::LinearOrders, {}}; }
  // Every CP-net over the misreporting agent's own dependency graph (no edges
  // when the agent's preference is not a CP-net).
  static MisreportSpace cp_nets() { return {Kind::CpNets, {}}; }
  static MisreportSpace independent_cp_nets() { return {Kind::IndependentCpNets, {}}; }
  static MisreportSpace explicit_list(std::vector<std::pair<AgentIndex, AgentPreference>> reports) {
    return {Kind::Explicit, std::move(reports)};
  }
};

std::string_view misreport_space_name(MisreportSpace::Kind kind);

enum class SpStrength { Sd, Weak };

// Empty `tiebreak_sets` means default_tiebreak_sets(instance). Throws
// MisreportSpaceTooLarge when the space exceeds its enumeration bound.
PropertyReport check_strategyproofness(Mechanism mechanism, const Instance& instance, const MisreportSpace& space,
                                       SpStrength strength, std::span<const Tiebreaks> tiebreak_sets = {});

struct Transform {
  AgentIndex agent;
  AgentPreference updated;
  BundleIndex pivot;
};

struct TransformSource {
  enum class Kind { Explicit, GeneratedDeletions, CpNets };
  Kind kind = Kind::GeneratedDeletions;
  std::vector<Transform> transforms;  // Explicit
  std::size_t max_removed = 2;        // GeneratedDeletions

  static TransformSource explicit_list(std::vector<Transform> transforms) {
    return {Kind::Explicit, std::move(transforms), 0};
  }
  static TransformSource generated(std::size_t max_removed = 2) { return {Kind::GeneratedDeletions, {}, max_removed}; }
  // Every CP-net over the agent's own dependency graph, at every pivot where
  // it is an upper invariant transformation.
  static TransformSource cp_nets() { return {Kind::CpNets, {}, 0}; }
};

// Transforms that are not upper invariant under the truthful outcome are
// skipped.
PropertyReport check_upper_invariance(Mechanism mechanism, const Instance& instance, const TransformSource& source,
                                      std::span<const Tiebreaks> tiebreak_sets = {});

std::string describe_report(const Instance& instance, const PropertyReport& report);

}  // namespace mtra
