#pragma once

#include "mtra/bundle.hpp"
#include "mtra/rational.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mtra {

class Instance;

// agents x bundles matrix of exact shares.
class FractionalAssignment {
 public:
  FractionalAssignment() = default;
  FractionalAssignment(std::size_t agents, std::size_t bundles)
      : agents_(agents), bundles_(bundles), cells_(agents * bundles, Rational(0)) {}

  std::size_t agent_count() const { return agents_; }
  std::size_t bundle_count() const { return bundles_; }

  Rational& at(AgentIndex agent, BundleIndex bundle) { return cells_[agent * bundles_ + bundle]; }
  const Rational& at(AgentIndex agent, BundleIndex bundle) const { return cells_[agent * bundles_ + bundle]; }

  std::span<const Rational> row(AgentIndex agent) const {
    return {cells_.data() + agent * bundles_, bundles_};
  }
  std::span<Rational> row(AgentIndex agent) { return {cells_.data() + agent * bundles_, bundles_}; }

  bool operator==(const FractionalAssignment&) const = default;

 private:
  std::size_t agents_ = 0;
  std::size_t bundles_ = 0;
  std::vector<Rational> cells_;
};

// bundle_of[j] is agent j's bundle.
struct DiscreteAssignment {
  std::vector<BundleIndex> bundle_of;

  bool operator==(const DiscreteAssignment&) const = default;
  auto operator<=>(const DiscreteAssignment&) const = default;
};

struct LotteryOutcome {
  Rational probability;
  DiscreteAssignment assignment;
};

struct Lottery {
  std::vector<LotteryOutcome> outcomes;
};

struct AssignmentViolation {
  enum class Kind { EntryOutOfRange, RowSum, ItemMarginal };
  Kind kind;
  std::size_t index;  // agent, item, or flattened cell
  Rational actual;

  std::string describe(const Instance& instance) const;
};

// nullopt when every entry is in [0,1], rows sum to 1 and every item is fully
// allocated. Throws DimensionMismatch when the matrix shape is wrong.
std::optional<AssignmentViolation> validate_assignment(const FractionalAssignment& assignment,
                                                       const Instance& instance);

// One agent per bundle, no item used twice.
bool is_valid_discrete(const DiscreteAssignment& assignment, const BundleSpace& space);

FractionalAssignment from_discrete(const DiscreteAssignment& assignment, std::size_t bundle_count);

// Probability-weighted sum of the outcomes.
FractionalAssignment expectation(const Lottery& lottery, std::size_t agents, std::size_t bundles);

// Positive probabilities summing to exactly one, valid outcomes.
bool is_valid_lottery(const Lottery& lottery, const BundleSpace& space);

// All (n!)^p discrete assignments: per type, a permutation handing items to agents.
std::vector<DiscreteAssignment> enumerate_discrete_assignments(const BundleSpace& space);
std::size_t discrete_assignment_count(const BundleSpace& space);

}  // namespace mtra
