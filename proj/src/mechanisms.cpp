#include "mtra/mechanisms.hpp"

#include "mtra/error.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mtra {

Tiebreaks Tiebreaks::canonical(const Instance& instance) {
  return uniform(instance.agent_count(), LinearOrder::canonical(instance.bundle_count()));
}

Tiebreaks Tiebreaks::uniform(std::size_t agents, const LinearOrder& order) {
  return Tiebreaks{std::vector<LinearOrder>(agents, order)};
}

std::vector<LinearOrder> sort_profile(const Instance& instance, const Tiebreaks& tiebreaks) {
  if (tiebreaks.per_agent.size() != instance.agent_count()) {
    throw Error(ErrorKind::DimensionMismatch, "one tiebreak per agent expected");
  }
  std::vector<LinearOrder> sorts;
  sorts.reserve(instance.agent_count());
  for (AgentIndex j = 0; j < instance.agent_count(); ++j) {
    sorts.push_back(topological_sort(instance.order(j), tiebreaks.per_agent[j]));
  }
  return sorts;
}

namespace {

void remove_bundle_items(const BundleSpace& space, BundleIndex bundle, ItemMask& available) {
  for (std::size_t t = 0; t < space.type_count(); ++t) available[space.global_item_of(bundle, t)] = false;
}

BundleIndex favourite(const LinearOrder& sort, const BundleSpace& space, const ItemMask& available) {
  auto b = ext(sort, space, available);
  // Square instances always leave a full bundle for every remaining agent.
  if (!b) throw std::logic_error("no available bundle for an agent that still has demand");
  return *b;
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::mt19937_64::max() - (std::mt19937_64::max() % bound);
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

}  // namespace

DiscreteAssignment serial_dictatorship(const BundleSpace& space, std::span<const LinearOrder> sorts,
                                       std::span<const AgentIndex> priority) {
  ItemMask available(space.item_count(), true);
  DiscreteAssignment out;
  out.bundle_of.assign(sorts.size(), 0);
  for (auto agent : priority) {
    const auto bundle = favourite(sorts[agent], space, available);
    out.bundle_of[agent] = bundle;
    remove_bundle_items(space, bundle, available);
  }
  return out;
}

DiscreteAssignment serial_dictatorship(const Instance& instance, const Tiebreaks& tiebreaks,
                                       std::span<const AgentIndex> priority) {
  const auto sorts = sort_profile(instance, tiebreaks);
  return serial_dictatorship(instance.space(), sorts, priority);
}

MrpResult mrp(const Instance& instance, const MrpMode& mode, const Tiebreaks& tiebreaks) {
  const std::size_t n = instance.agent_count();
  const auto sorts = sort_profile(instance, tiebreaks);
  const auto& space = instance.space();
  MrpResult result;
  switch (mode.kind) {
    case MrpMode::Kind::SingleRun: {
      auto priority = mode.priority;
      auto sorted = priority;
      std::sort(sorted.begin(), sorted.end());
      std::vector<AgentIndex> identity(n);
      std::iota(identity.begin(), identity.end(), AgentIndex{0});
      if (sorted != identity) throw Error(ErrorKind::DimensionMismatch, "priority must be a permutation of the agents");
      result.assignment = from_discrete(serial_dictatorship(space, sorts, priority), space.size());
      return result;
    }
    case MrpMode::Kind::Exact: {
      auto lottery = mrp_lottery(space, sorts);
      result.assignment = expectation(lottery, n, space.size());
      result.lottery = std::move(lottery);
      return result;
    }
    case MrpMode::Kind::MonteCarlo: {
      if (mode.samples == 0) throw Error(ErrorKind::Parse, "Monte Carlo mode needs at least one sample");
      std::mt19937_64 rng(mode.seed);
      std::vector<std::vector<std::size_t>> counts(n, std::vector<std::size_t>(space.size(), 0));
      std::vector<AgentIndex> priority(n);
      for (std::size_t s = 0; s < mode.samples; ++s) {
        std::iota(priority.begin(), priority.end(), AgentIndex{0});
        for (std::size_t i = n; i > 1; --i) std::swap(priority[i - 1], priority[bounded(rng, i)]);
        const auto outcome = serial_dictatorship(space, sorts, priority);
        for (AgentIndex j = 0; j < n; ++j) ++counts[j][outcome.bundle_of[j]];
      }
      result.assignment = FractionalAssignment(n, space.size());
      for (AgentIndex j = 0; j < n; ++j) {
        for (BundleIndex b = 0; b < space.size(); ++b) {
          result.assignment.at(j, b) = Rational(static_cast<unsigned long>(counts[j][b]),
                                                static_cast<unsigned long>(mode.samples));
          result.assignment.at(j, b).canonicalize();
        }
      }
      return result;
    }
  }
  return result;
}

Lottery mrp_lottery(const BundleSpace& space, std::span<const LinearOrder> sorts) {
  const std::size_t n = sorts.size();
  if (n > kMaxExactMrpAgents) {
    throw Error(ErrorKind::TooManyAgentsForExact,
                std::to_string(n) + " agents exceed the exact-enumeration limit of " + std::to_string(kMaxExactMrpAgents));
  }
  std::vector<AgentIndex> priority(n);
  std::iota(priority.begin(), priority.end(), AgentIndex{0});
  std::size_t orders = 1;
  for (std::size_t i = 2; i <= n; ++i) orders *= i;
  const Rational weight(1, static_cast<unsigned long>(orders));
  Lottery lottery;
  lottery.outcomes.reserve(orders);
  do {
    lottery.outcomes.push_back({weight, serial_dictatorship(space, sorts, priority)});
  } while (std::next_permutation(priority.begin(), priority.end()));
  return lottery;
}

MpsResult mps(const BundleSpace& space, std::span<const LinearOrder> sorts) {
  const std::size_t n = sorts.size();
  MpsResult result{FractionalAssignment(n, space.size()), {}};
  std::vector<Rational> supply(space.item_count(), Rational(1));
  ItemMask available(space.item_count(), true);
  std::vector<std::size_t> consumers(space.item_count());
  Rational clock = 0;
  while (clock < 1) {
    MpsRound round;
    round.start = clock;
    round.eating.resize(n);
    std::fill(consumers.begin(), consumers.end(), 0);
    for (AgentIndex j = 0; j < n; ++j) {
      round.eating[j] = favourite(sorts[j], space, available);
      for (std::size_t t = 0; t < space.type_count(); ++t) ++consumers[space.global_item_of(round.eating[j], t)];
    }
    // Items nobody eats this round do not bound its length.
    std::optional<Rational> progress;
    for (ItemIndex o = 0; o < supply.size(); ++o) {
      if (consumers[o] == 0) continue;
      Rational ratio = supply[o] / static_cast<unsigned long>(consumers[o]);
      if (!progress || ratio < *progress) progress = ratio;
    }
    for (AgentIndex j = 0; j < n; ++j) result.assignment.at(j, round.eating[j]) += *progress;
    for (ItemIndex o = 0; o < supply.size(); ++o) {
      if (consumers[o] == 0) continue;
      supply[o] -= *progress * static_cast<unsigned long>(consumers[o]);
      if (supply[o] == 0) {
        available[o] = false;
        round.exhausted.push_back(o);
      }
    }
    clock += *progress;
    round.end = clock;
    result.trace.rounds.push_back(std::move(round));
  }
  if (clock != 1 || std::any_of(supply.begin(), supply.end(), [](const Rational& s) { return s != 0; })) {
    throw std::logic_error("eating did not exhaust every item at time 1");
  }
  return result;
}

MpsResult mps(const Instance& instance, const Tiebreaks& tiebreaks) {
  const auto sorts = sort_profile(instance, tiebreaks);
  return mps(instance.space(), sorts);
}

FractionalAssignment mgd(const BundleSpace& space, std::span<const LinearOrder> sorts) {
  const std::size_t n = sorts.size();
  FractionalAssignment out(n, space.size());
  ItemMask available(space.item_count(), true);
  for (AgentIndex j = 0; j < n; ++j) {
    const auto top = favourite(sorts[j], space, available);
    std::vector<AgentIndex> group;
    for (AgentIndex k = 0; k < n; ++k) {
      if (sorts[k] == sorts[j]) group.push_back(k);
    }
    const Rational share(1, static_cast<unsigned long>(group.size()));
    for (auto member : group) out.at(member, top) = share;
    remove_bundle_items(space, top, available);
  }
  return out;
}

FractionalAssignment mgd(const Instance& instance, const Tiebreaks& tiebreaks) {
  const auto sorts = sort_profile(instance, tiebreaks);
  return mgd(instance.space(), sorts);
}

MgdDecomposition mgd_decompose(const Instance& instance, const Tiebreaks& tiebreaks) {
  const auto sorts = sort_profile(instance, tiebreaks);
  const std::size_t n = instance.agent_count();

  // Groups of agents sharing a sort, each listed in ascending agent order.
  std::vector<std::vector<AgentIndex>> groups;
  std::vector<bool> placed(n, false);
  for (AgentIndex j = 0; j < n; ++j) {
    if (placed[j]) continue;
    std::vector<AgentIndex> group;
    for (AgentIndex k = j; k < n; ++k) {
      if (!placed[k] && sorts[k] == sorts[j]) {
        group.push_back(k);
        placed[k] = true;
      }
    }
    groups.push_back(std::move(group));
  }
  std::size_t period = 1;
  for (const auto& g : groups) period = std::lcm(period, g.size());

  MgdDecomposition out;
  const Rational weight(1, static_cast<unsigned long>(period));
  for (std::size_t u = 0; u < period; ++u) {
    // Slot s_{l,m} of the identity order goes to s_{l,(m+u) mod |s_l|}.
    std::vector<AgentIndex> priority(n);
    for (const auto& g : groups) {
      for (std::size_t m = 0; m < g.size(); ++m) priority[g[m]] = g[(m + u) % g.size()];
    }
    out.lottery.outcomes.push_back({weight, serial_dictatorship(instance.space(), sorts, priority)});
    out.priorities.push_back(std::move(priority));
  }
  return out;
}

std::string_view mechanism_name(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::Mrp: return "mrp";
    case Mechanism::Mps: return "mps";
    case Mechanism::Mgd: return "mgd";
  }
  return "";
}

std::optional<Mechanism> parse_mechanism(std::string_view name) {
  if (name == "mrp") return Mechanism::Mrp;
  if (name == "mps") return Mechanism::Mps;
  if (name == "mgd") return Mechanism::Mgd;
  return std::nullopt;
}

FractionalAssignment run_mechanism(Mechanism mechanism, const Instance& instance, const Tiebreaks& tiebreaks) {
  switch (mechanism) {
    case Mechanism::Mrp: return mrp(instance, MrpMode::exact(), tiebreaks).assignment;
    case Mechanism::Mps: return mps(instance, tiebreaks).assignment;
    case Mechanism::Mgd: return mgd(instance, tiebreaks);
  }
  throw std::logic_error("unknown mechanism");
}

FractionalAssignment run_mechanism(Mechanism mechanism, const BundleSpace& space, std::span<const LinearOrder> sorts) {
  switch (mechanism) {
    case Mechanism::Mrp: return expectation(mrp_lottery(space, sorts), sorts.size(), space.size());
    case Mechanism::Mps: return mps(space, sorts).assignment;
    case Mechanism::Mgd: return mgd(space, sorts);
  }
  throw std::logic_error("unknown mechanism");
}

}  // namespace mtra
