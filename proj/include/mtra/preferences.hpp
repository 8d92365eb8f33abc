#pragma once

#include "mtra/bundle.hpp"
#include "mtra/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mtra {

using BundlePair = std::pair<BundleIndex, BundleIndex>;

// Strict partial order over a bundle universe, stored transitively closed.
class PartialOrder {
 public:
  explicit PartialOrder(std::size_t universe = 0);

  // Transitive closure of (better, worse) pairs. Throws CyclicPreference when
  // the pairs contain a cycle.
  static PartialOrder from_pairs(std::size_t universe, std::span<const BundlePair> pairs);
  // Total order with sequence[0] the best bundle.
  static PartialOrder from_sequence(std::size_t universe, std::span<const BundleIndex> sequence);

  std::size_t universe() const { return n_; }
  bool prefers(BundleIndex better, BundleIndex worse) const { return rel_[better * n_ + worse] != 0; }
  bool comparable(BundleIndex a, BundleIndex b) const { return prefers(a, b) || prefers(b, a); }
  bool is_linear() const;
  bool empty() const;

  // All (better, worse) pairs in row-major order.
  std::vector<BundlePair> pairs() const;

  bool operator==(const PartialOrder&) const = default;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> rel_;
};

// Covering (Hasse) edges of a partial order.
struct PreferenceGraph {
  std::size_t universe = 0;
  std::vector<BundlePair> edges;
};

PreferenceGraph preference_graph(const PartialOrder& order);
PartialOrder transitive_closure(const PreferenceGraph& graph);

// The bundle itself plus everything strictly above it, ascending index order.
std::vector<BundleIndex> upper_contour_set(const PartialOrder& order, BundleIndex x);

// Sequence of bundles, best first. Used both for topological sorts and for
// the tiebreak orders that drive them.
struct LinearOrder {
  std::vector<BundleIndex> sequence;

  static LinearOrder canonical(std::size_t universe);
  static LinearOrder reversed_canonical(std::size_t universe);

  std::size_t size() const { return sequence.size(); }
  // rank[b] = position of b in the sequence.
  std::vector<std::size_t> ranks() const;
  bool is_permutation_of(std::size_t universe) const;
  bool extends(const PartialOrder& order) const;

  bool operator==(const LinearOrder&) const = default;
};

// Kahn's algorithm; among the current sources the tiebreak-least is emitted.
LinearOrder topological_sort(const PartialOrder& order, const LinearOrder& tiebreak);

// First bundle of `linear` whose items are all available; nullopt when none is.
std::optional<BundleIndex> ext(const LinearOrder& linear, const BundleSpace& space,
                               const ItemMask& available);

// Types ordered so every parent precedes its children; throws
// CyclicDependency when the parent graph has a cycle.
std::vector<std::size_t> dependency_order(const std::vector<std::vector<std::size_t>>& parents);

// Acyclic CP-net: per type, a parent set and one strict item ranking per
// assignment to the parents.
class CPNet {
 public:
  // parents[t]: parent types of t. tables[t][key]: ranking of t's items (best
  // first) under the parent assignment with mixed-radix index `key` (first
  // listed parent most significant). Throws CyclicDependency / IncompleteCPT.
  CPNet(BundleSpace space, std::vector<std::vector<std::size_t>> parents,
        std::vector<std::vector<std::vector<std::size_t>>> tables);

  // Every type ranked by the same order regardless of other types.
  static CPNet independent(BundleSpace space, std::vector<std::vector<std::size_t>> rankings);

  const BundleSpace& space() const { return space_; }
  const std::vector<std::size_t>& parents(std::size_t type) const { return parents_[type]; }
  const std::vector<std::vector<std::size_t>>& table(std::size_t type) const { return tables_[type]; }
  std::size_t row_count(std::size_t type) const { return tables_[type].size(); }
  bool is_independent() const;
  // Dependency-topological order of the types; smallest index first among ties.
  const std::vector<std::size_t>& type_order() const { return type_order_; }

  std::size_t parent_key(std::size_t type, BundleIndex bundle) const;
  std::size_t parent_key(std::size_t type, std::span<const std::size_t> items) const;
  const std::vector<std::size_t>& ranking(std::size_t type, std::size_t key) const {
    return tables_[type][key];
  }
  // Position of `item` in the ranking of row `key` (0 = best).
  std::size_t rank(std::size_t type, std::size_t key, std::size_t item) const {
    return positions_[type][key][item];
  }

  bool operator==(const CPNet& other) const {
    return space_ == other.space_ && parents_ == other.parents_ && tables_ == other.tables_;
  }

 private:
  BundleSpace space_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::vector<std::size_t>>> tables_;
  std::vector<std::vector<std::vector<std::size_t>>> positions_;
  std::vector<std::size_t> type_order_;
};

// Transitive closure of all single-type flips sanctioned by the CPTs.
PartialOrder induce_order(const CPNet& net);

// Unique best bundle among those built from available items (nullopt if some
// type has nothing available).
std::optional<BundleIndex> top_cpnet(const CPNet& net, const ItemMask& available);

struct UitVerdict {
  bool valid = false;
  std::vector<BundleIndex> removed;  // Z, when valid
  std::string reason;                // why not, when invalid
};

// Is `updated` an upper invariant transformation of `original` at `pivot`
// under an agent whose allocation row is `shares`?
UitVerdict is_uit(const PartialOrder& original, const PartialOrder& updated, BundleIndex pivot,
                  std::span<const Rational> shares);

// Drops every pair (z, y) with z in `removed` and y in UCS(order, pivot). The
// result is transitive and its upper contour set at `pivot` is the old one
// minus `removed`.
PartialOrder delete_from_upper_contour(const PartialOrder& order, BundleIndex pivot,
                                       std::span<const BundleIndex> removed);

// Number of CP-nets over the given dependency graph (saturates at SIZE_MAX).
std::size_t count_cpnets(const BundleSpace& space, const std::vector<std::vector<std::size_t>>& parents);

// Enumerates every CP-net over the dependency graph in a fixed order. Stops
// early when the callback returns false.
void for_each_cpnet(const BundleSpace& space, const std::vector<std::vector<std::size_t>>& parents,
                    const std::function<bool(const CPNet&)>& visit);

// Enumerates all permutations of the universe in lexicographic order.
void for_each_linear_order(std::size_t universe, const std::function<bool(const LinearOrder&)>& visit);

}  // namespace mtra
