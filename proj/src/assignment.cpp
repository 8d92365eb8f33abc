#include "mtra/assignment.hpp"

#include "mtra/error.hpp"
#include "mtra/instance.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace mtra {

std::string AssignmentViolation::describe(const Instance& instance) const {
  switch (kind) {
    case Kind::EntryOutOfRange: {
      const auto agent = index / instance.bundle_count();
      const auto bundle = index % instance.bundle_count();
      return "entry (agent " + std::to_string(agent + 1) + ", " + instance.bundle_name(bundle) +
             ") = " + to_string(actual) + " outside [0,1]";
    }
    case Kind::RowSum:
      return "row of agent " + std::to_string(index + 1) + " sums to " + to_string(actual);
    case Kind::ItemMarginal:
      return "item " + instance.item_name(index) + " is allocated " + to_string(actual);
  }
  return {};
}

std::optional<AssignmentViolation> validate_assignment(const FractionalAssignment& assignment,
                                                       const Instance& instance) {
  if (assignment.agent_count() != instance.agent_count() ||
      assignment.bundle_count() != instance.bundle_count()) {
    throw Error(ErrorKind::DimensionMismatch, "assignment is " + std::to_string(assignment.agent_count()) + "x" +
                                                  std::to_string(assignment.bundle_count()) + ", instance needs " +
                                                  std::to_string(instance.agent_count()) + "x" +
                                                  std::to_string(instance.bundle_count()));
  }
  const auto& space = instance.space();
  for (AgentIndex j = 0; j < assignment.agent_count(); ++j) {
    for (BundleIndex b = 0; b < assignment.bundle_count(); ++b) {
      const auto& v = assignment.at(j, b);
      if (v < 0 || v > 1) {
        return AssignmentViolation{AssignmentViolation::Kind::EntryOutOfRange, j * assignment.bundle_count() + b, v};
      }
    }
  }
  for (AgentIndex j = 0; j < assignment.agent_count(); ++j) {
    Rational total = sum(assignment.row(j));
    if (total != 1) return AssignmentViolation{AssignmentViolation::Kind::RowSum, j, total};
  }
  std::vector<Rational> marginal(space.item_count(), Rational(0));
  for (AgentIndex j = 0; j < assignment.agent_count(); ++j) {
    for (BundleIndex b = 0; b < assignment.bundle_count(); ++b) {
      if (assignment.at(j, b) == 0) continue;
      for (std::size_t t = 0; t < space.type_count(); ++t) marginal[space.global_item_of(b, t)] += assignment.at(j, b);
    }
  }
  for (ItemIndex o = 0; o < marginal.size(); ++o) {
    if (marginal[o] != 1) return AssignmentViolation{AssignmentViolation::Kind::ItemMarginal, o, marginal[o]};
  }
  return std::nullopt;
}

bool is_valid_discrete(const DiscreteAssignment& assignment, const BundleSpace& space) {
  if (assignment.bundle_of.size() != space.items_per_type()) return false;
  std::vector<bool> used(space.item_count(), false);
  for (auto b : assignment.bundle_of) {
    if (b >= space.size()) return false;
    for (std::size_t t = 0; t < space.type_count(); ++t) {
      const auto item = space.global_item_of(b, t);
      if (used[item]) return false;
      used[item] = true;
    }
  }
  return true;
}

FractionalAssignment from_discrete(const DiscreteAssignment& assignment, std::size_t bundle_count) {
  FractionalAssignment out(assignment.bundle_of.size(), bundle_count);
  for (AgentIndex j = 0; j < assignment.bundle_of.size(); ++j) out.at(j, assignment.bundle_of[j]) = 1;
  return out;
}

FractionalAssignment expectation(const Lottery& lottery, std::size_t agents, std::size_t bundles) {
  FractionalAssignment out(agents, bundles);
  for (const auto& outcome : lottery.outcomes) {
    for (AgentIndex j = 0; j < agents; ++j) out.at(j, outcome.assignment.bundle_of[j]) += outcome.probability;
  }
  return out;
}

bool is_valid_lottery(const Lottery& lottery, const BundleSpace& space) {
  Rational total = 0;
  for (const auto& outcome : lottery.outcomes) {
    if (outcome.probability <= 0 || !is_valid_discrete(outcome.assignment, space)) return false;
    total += outcome.probability;
  }
  return total == 1;
}

std::size_t discrete_assignment_count(const BundleSpace& space) {
  std::size_t perms = 1;
  for (std::size_t i = 2; i <= space.items_per_type(); ++i) perms *= i;
  std::size_t total = 1;
  for (std::size_t t = 0; t < space.type_count(); ++t) {
    if (total > std::numeric_limits<std::size_t>::max() / perms) return std::numeric_limits<std::size_t>::max();
    total *= perms;
  }
  return total;
}

std::vector<DiscreteAssignment> enumerate_discrete_assignments(const BundleSpace& space) {
  const std::size_t n = space.items_per_type();
  const std::size_t p = space.type_count();
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<DiscreteAssignment> out;
  std::vector<std::size_t> digits(p, 0);
  std::vector<std::size_t> items(p);
  while (true) {
    DiscreteAssignment a;
    a.bundle_of.resize(n);
    for (AgentIndex j = 0; j < n; ++j) {
      for (std::size_t t = 0; t < p; ++t) items[t] = perms[digits[t]][j];
      a.bundle_of[j] = space.encode(items);
    }
    out.push_back(std::move(a));
    std::size_t pos = p;
    bool done = true;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < perms.size()) {
        done = false;
        break;
      }
      digits[pos] = 0;
    }
    if (done) break;
  }
  return out;
}

}  // namespace mtra
