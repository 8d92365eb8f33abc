#pragma once

#include "mtra/assignment.hpp"
#include "mtra/instance.hpp"
#include "mtra/preferences.hpp"
#include "mtra/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mtra {

// Per-agent tiebreak orders that drive the topological sorts.
struct Tiebreaks {
  std::vector<LinearOrder> per_agent;

  static Tiebreaks canonical(const Instance& instance);
  static Tiebreaks uniform(std::size_t agents, const LinearOrder& order);
};

// Linear extension of every agent's preference under its tiebreak.
std::vector<LinearOrder> sort_profile(const Instance& instance, const Tiebreaks& tiebreaks);

// Agents pick ext(sort, remaining) in priority order.
DiscreteAssignment serial_dictatorship(const BundleSpace& space, std::span<const LinearOrder> sorts,
                                       std::span<const AgentIndex> priority);
DiscreteAssignment serial_dictatorship(const Instance& instance, const Tiebreaks& tiebreaks,
                                       std::span<const AgentIndex> priority);

inline constexpr std::size_t kMaxExactMrpAgents = 8;

struct MrpMode {
  enum class Kind { SingleRun, Exact, MonteCarlo };
  Kind kind = Kind::Exact;
  std::vector<AgentIndex> priority;  // SingleRun
  std::size_t samples = 0;           // MonteCarlo
  std::uint64_t seed = 0;            // MonteCarlo

  static MrpMode single_run(std::vector<AgentIndex> priority) { return {Kind::SingleRun, std::move(priority), 0, 0}; }
  static MrpMode exact() { return {Kind::Exact, {}, 0, 0}; }
  static MrpMode monte_carlo(std::size_t samples, std::uint64_t seed) { return {Kind::MonteCarlo, {}, samples, seed}; }
};

struct MrpResult {
  FractionalAssignment assignment;
  std::optional<Lottery> lottery;  // exact mode: one outcome per priority order
};

// Exact mode throws TooManyAgentsForExact above kMaxExactMrpAgents.
MrpResult mrp(const Instance& instance, const MrpMode& mode, const Tiebreaks& tiebreaks);

struct MpsRound {
  Rational start;
  Rational end;
  std::vector<BundleIndex> eating;   // per agent
  std::vector<ItemIndex> exhausted;  // items whose supply hit zero
};

struct MpsTrace {
  std::vector<MpsRound> rounds;
};

struct MpsResult {
  FractionalAssignment assignment;
  MpsTrace trace;
};

MpsResult mps(const Instance& instance, const Tiebreaks& tiebreaks);
MpsResult mps(const BundleSpace& space, std::span<const LinearOrder> sorts);

FractionalAssignment mgd(const Instance& instance, const Tiebreaks& tiebreaks);
FractionalAssignment mgd(const BundleSpace& space, std::span<const LinearOrder> sorts);

struct MgdDecomposition {
  std::vector<std::vector<AgentIndex>> priorities;  // one per lottery outcome
  Lottery lottery;
};

// Rotates agents within each equal-sort group over lcm(group sizes) priority
// orders; the uniform lottery over their serial dictatorships averages to mgd.
MgdDecomposition mgd_decompose(const Instance& instance, const Tiebreaks& tiebreaks);

enum class Mechanism { Mrp, Mps, Mgd };

std::string_view mechanism_name(Mechanism mechanism);
std::optional<Mechanism> parse_mechanism(std::string_view name);

// MRP is evaluated in exact-expectation mode.
FractionalAssignment run_mechanism(Mechanism mechanism, const Instance& instance, const Tiebreaks& tiebreaks);
// Same, starting from already computed sorts.
FractionalAssignment run_mechanism(Mechanism mechanism, const BundleSpace& space, std::span<const LinearOrder> sorts);

// Exact MRP expectation from sorts: uniform lottery over all n! priority orders.
Lottery mrp_lottery(const BundleSpace& space, std::span<const LinearOrder> sorts);

}  // namespace mtra
