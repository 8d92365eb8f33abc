#include "mtra/preferences.hpp"

#include "mtra/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace mtra {

// ---- PartialOrder ----------------------------------------------------------

PartialOrder::PartialOrder(std::size_t universe) : n_(universe), rel_(universe * universe, 0) {}

PartialOrder PartialOrder::from_pairs(std::size_t universe, std::span<const BundlePair> pairs) {
  PartialOrder order(universe);
  for (const auto& [better, worse] : pairs) {
    if (better >= universe || worse >= universe) {
      throw Error(ErrorKind::UnknownName, "bundle index out of range");
    }
    order.rel_[better * universe + worse] = 1;
  }
  const std::size_t n = universe;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!order.rel_[i * n + k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (order.rel_[k * n + j]) order.rel_[i * n + j] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (order.rel_[i * n + i]) {
      throw Error(ErrorKind::CyclicPreference, "preference edges contain a cycle");
    }
  }
  return order;
}

PartialOrder PartialOrder::from_sequence(std::size_t universe, std::span<const BundleIndex> sequence) {
  PartialOrder order(universe);
  for (std::size_t a = 0; a < sequence.size(); ++a) {
    for (std::size_t b = a + 1; b < sequence.size(); ++b) {
      order.rel_[sequence[a] * universe + sequence[b]] = 1;
    }
  }
  return order;
}

bool PartialOrder::is_linear() const {
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = a + 1; b < n_; ++b) {
      if (!comparable(a, b)) return false;
    }
  }
  return true;
}

bool PartialOrder::empty() const {
  return std::none_of(rel_.begin(), rel_.end(), [](std::uint8_t v) { return v != 0; });
}

std::vector<BundlePair> PartialOrder::pairs() const {
  std::vector<BundlePair> out;
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) {
      if (prefers(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

PreferenceGraph preference_graph(const PartialOrder& order) {
  PreferenceGraph graph{order.universe(), {}};
  const std::size_t n = order.universe();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (!order.prefers(x, y)) continue;
      bool covered = true;
      for (std::size_t z = 0; z < n && covered; ++z) {
        if (order.prefers(x, z) && order.prefers(z, y)) covered = false;
      }
      if (covered) graph.edges.emplace_back(x, y);
    }
  }
  return graph;
}

PartialOrder transitive_closure(const PreferenceGraph& graph) {
  return PartialOrder::from_pairs(graph.universe, graph.edges);
}

std::vector<BundleIndex> upper_contour_set(const PartialOrder& order, BundleIndex x) {
  std::vector<BundleIndex> out;
  for (std::size_t y = 0; y < order.universe(); ++y) {
    if (y == x || order.prefers(y, x)) out.push_back(y);
  }
  return out;
}

// ---- LinearOrder -----------------------------------------------------------

LinearOrder LinearOrder::canonical(std::size_t universe) {
  LinearOrder out;
  out.sequence.resize(universe);
  std::iota(out.sequence.begin(), out.sequence.end(), BundleIndex{0});
  return out;
}

LinearOrder LinearOrder::reversed_canonical(std::size_t universe) {
  LinearOrder out = canonical(universe);
  std::reverse(out.sequence.begin(), out.sequence.end());
  return out;
}

std::vector<std::size_t> LinearOrder::ranks() const {
  std::vector<std::size_t> rank(sequence.size());
  for (std::size_t i = 0; i < sequence.size(); ++i) rank[sequence[i]] = i;
  return rank;
}

bool LinearOrder::is_permutation_of(std::size_t universe) const {
  if (sequence.size() != universe) return false;
  std::vector<bool> seen(universe, false);
  for (auto b : sequence) {
    if (b >= universe || seen[b]) return false;
    seen[b] = true;
  }
  return true;
}

bool LinearOrder::extends(const PartialOrder& order) const {
  if (!is_permutation_of(order.universe())) return false;
  const auto rank = ranks();
  for (const auto& [better, worse] : order.pairs()) {
    if (rank[better] > rank[worse]) return false;
  }
  return true;
}

LinearOrder topological_sort(const PartialOrder& order, const LinearOrder& tiebreak) {
  const std::size_t n = order.universe();
  if (!tiebreak.is_permutation_of(n)) {
    throw Error(ErrorKind::UniverseMismatch, "tiebreak is not a permutation of the bundle universe");
  }
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (order.prefers(x, y)) ++indegree[y];
    }
  }
  std::vector<bool> emitted(n, false);
  LinearOrder out;
  out.sequence.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    // tiebreak.sequence is scanned in order, so the first source found is the
    // tiebreak-least one.
    BundleIndex chosen = n;
    for (auto candidate : tiebreak.sequence) {
      if (!emitted[candidate] && indegree[candidate] == 0) {
        chosen = candidate;
        break;
      }
    }
    emitted[chosen] = true;
    out.sequence.push_back(chosen);
    for (std::size_t y = 0; y < n; ++y) {
      if (order.prefers(chosen, y)) --indegree[y];
    }
  }
  return out;
}

std::optional<BundleIndex> ext(const LinearOrder& linear, const BundleSpace& space,
                               const ItemMask& available) {
  for (auto bundle : linear.sequence) {
    bool ok = true;
    for (std::size_t t = 0; t < space.type_count() && ok; ++t) {
      ok = available[space.global_item_of(bundle, t)];
    }
    if (ok) return bundle;
  }
  return std::nullopt;
}

// ---- CPNet -----------------------------------------------------------------

namespace {

std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::size_t>::max() / base) {
      return std::numeric_limits<std::size_t>::max();
    }
    out *= base;
  }
  return out;
}

}  // namespace

std::vector<std::size_t> dependency_order(const std::vector<std::vector<std::size_t>>& parents) {
  const std::size_t p = parents.size();
  std::vector<std::size_t> missing(p);
  for (std::size_t t = 0; t < p; ++t) missing[t] = parents[t].size();
  std::vector<bool> placed(p, false);
  std::vector<std::size_t> order;
  while (order.size() < p) {
    std::size_t next = p;
    for (std::size_t t = 0; t < p; ++t) {
      if (!placed[t] && missing[t] == 0) {
        next = t;
        break;
      }
    }
    if (next == p) throw Error(ErrorKind::CyclicDependency, "CP-net dependency graph has a cycle");
    placed[next] = true;
    order.push_back(next);
    for (std::size_t t = 0; t < p; ++t) {
      for (auto parent : parents[t]) {
        if (parent == next) --missing[t];
      }
    }
  }
  return order;
}

CPNet::CPNet(BundleSpace space, std::vector<std::vector<std::size_t>> parents,
             std::vector<std::vector<std::vector<std::size_t>>> tables)
    : space_(space), parents_(std::move(parents)), tables_(std::move(tables)) {
  const std::size_t p = space_.type_count();
  const std::size_t n = space_.items_per_type();
  if (parents_.size() != p) throw Error(ErrorKind::DimensionMismatch, "parent list per type expected");
  if (tables_.size() != p) throw Error(ErrorKind::IncompleteCPT, "one CPT per type expected");
  for (std::size_t t = 0; t < p; ++t) {
    auto& pa = parents_[t];
    for (auto parent : pa) {
      if (parent >= p) throw Error(ErrorKind::UnknownName, "parent type out of range");
      if (parent == t) throw Error(ErrorKind::CyclicDependency, "type depends on itself");
    }
    auto sorted = pa;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorKind::Parse, "duplicate dependency edge");
    }
  }
  type_order_ = dependency_order(parents_);
  positions_.resize(p);
  for (std::size_t t = 0; t < p; ++t) {
    const std::size_t rows = checked_pow(n, parents_[t].size());
    if (tables_[t].size() != rows) {
      throw Error(ErrorKind::IncompleteCPT, "CPT of type " + std::to_string(t) + " needs " +
                                                std::to_string(rows) + " rows");
    }
    positions_[t].resize(rows);
    for (std::size_t key = 0; key < rows; ++key) {
      const auto& row = tables_[t][key];
      std::vector<std::size_t> pos(n, n);
      if (row.size() != n) throw Error(ErrorKind::IncompleteCPT, "CPT row is not a total order");
      for (std::size_t r = 0; r < n; ++r) {
        if (row[r] >= n || pos[row[r]] != n) {
          throw Error(ErrorKind::IncompleteCPT, "CPT row is not a total order");
        }
        pos[row[r]] = r;
      }
      positions_[t][key] = std::move(pos);
    }
  }
}

CPNet CPNet::independent(BundleSpace space, std::vector<std::vector<std::size_t>> rankings) {
  std::vector<std::vector<std::size_t>> parents(space.type_count());
  std::vector<std::vector<std::vector<std::size_t>>> tables;
  tables.reserve(rankings.size());
  for (auto& r : rankings) tables.push_back({std::move(r)});
  return CPNet(space, std::move(parents), std::move(tables));
}

bool CPNet::is_independent() const {
  return std::all_of(parents_.begin(), parents_.end(), [](const auto& pa) { return pa.empty(); });
}

std::size_t CPNet::parent_key(std::size_t type, BundleIndex bundle) const {
  std::size_t key = 0;
  for (auto parent : parents_[type]) key = key * space_.items_per_type() + space_.item_of(bundle, parent);
  return key;
}

std::size_t CPNet::parent_key(std::size_t type, std::span<const std::size_t> items) const {
  std::size_t key = 0;
  for (auto parent : parents_[type]) key = key * space_.items_per_type() + items[parent];
  return key;
}

PartialOrder induce_order(const CPNet& net) {
  const auto& space = net.space();
  std::vector<BundlePair> flips;
  for (BundleIndex b = 0; b < space.size(); ++b) {
    for (std::size_t t = 0; t < space.type_count(); ++t) {
      const std::size_t key = net.parent_key(t, b);
      const std::size_t mine = space.item_of(b, t);
      for (std::size_t other = 0; other < space.items_per_type(); ++other) {
        if (other == mine) continue;
        if (net.rank(t, key, mine) < net.rank(t, key, other)) {
          flips.emplace_back(b, space.with_item(b, t, other));
        }
      }
    }
  }
  return PartialOrder::from_pairs(space.size(), flips);
}

std::optional<BundleIndex> top_cpnet(const CPNet& net, const ItemMask& available) {
  const auto& space = net.space();
  std::vector<std::size_t> chosen(space.type_count(), 0);
  for (auto t : net.type_order()) {
    const auto& row = net.ranking(t, net.parent_key(t, chosen));
    auto it = std::find_if(row.begin(), row.end(),
                           [&](std::size_t item) { return available[space.global_item(t, item)]; });
    if (it == row.end()) return std::nullopt;
    chosen[t] = *it;
  }
  return space.encode(chosen);
}

// ---- upper invariant transformations --------------------------------------

UitVerdict is_uit(const PartialOrder& original, const PartialOrder& updated, BundleIndex pivot,
                  std::span<const Rational> shares) {
  if (original.universe() != updated.universe() || shares.size() != original.universe()) {
    throw Error(ErrorKind::UniverseMismatch, "orders and allocation row disagree on the universe");
  }
  UitVerdict verdict;
  const auto old_upper = upper_contour_set(original, pivot);
  const auto new_upper = upper_contour_set(updated, pivot);
  for (auto y : new_upper) {
    if (!std::binary_search(old_upper.begin(), old_upper.end(), y)) {
      verdict.reason = "bundle " + std::to_string(y) + " enters the upper contour set";
      return verdict;
    }
  }
  for (auto y : old_upper) {
    if (std::binary_search(new_upper.begin(), new_upper.end(), y)) continue;
    if (shares[y] != 0) {
      verdict.reason = "removed bundle " + std::to_string(y) + " has positive share";
      return verdict;
    }
    verdict.removed.push_back(y);
  }
  for (auto a : new_upper) {
    for (auto b : new_upper) {
      if (original.prefers(a, b) != updated.prefers(a, b)) {
        verdict.removed.clear();
        verdict.reason = "relation changes inside the new upper contour set";
        return verdict;
      }
    }
  }
  verdict.valid = true;
  return verdict;
}

PartialOrder delete_from_upper_contour(const PartialOrder& order, BundleIndex pivot,
                                       std::span<const BundleIndex> removed) {
  const auto upper = upper_contour_set(order, pivot);
  std::vector<BundlePair> kept;
  for (const auto& [better, worse] : order.pairs()) {
    const bool drop = std::find(removed.begin(), removed.end(), better) != removed.end() &&
                      std::binary_search(upper.begin(), upper.end(), worse);
    if (!drop) kept.emplace_back(better, worse);
  }
  return PartialOrder::from_pairs(order.universe(), kept);
}

// ---- enumeration -----------------------------------------------------------

namespace {

std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

std::size_t count_cpnets(const BundleSpace& space, const std::vector<std::vector<std::size_t>>& parents) {
  std::size_t perms = 1;
  for (std::size_t i = 2; i <= space.items_per_type(); ++i) perms *= i;
  std::size_t rows = 0;
  for (const auto& pa : parents) rows += checked_pow(space.items_per_type(), pa.size());
  return checked_pow(perms, rows);
}

void for_each_cpnet(const BundleSpace& space, const std::vector<std::vector<std::size_t>>& parents,
                    const std::function<bool(const CPNet&)>& visit) {
  const auto perms = all_permutations(space.items_per_type());
  const std::size_t p = space.type_count();
  std::vector<std::size_t> rows_per_type(p);
  std::size_t total_rows = 0;
  for (std::size_t t = 0; t < p; ++t) {
    rows_per_type[t] = checked_pow(space.items_per_type(), parents[t].size());
    total_rows += rows_per_type[t];
  }
  std::vector<std::size_t> digits(total_rows, 0);
  while (true) {
    std::vector<std::vector<std::vector<std::size_t>>> tables(p);
    std::size_t d = 0;
    for (std::size_t t = 0; t < p; ++t) {
      tables[t].reserve(rows_per_type[t]);
      for (std::size_t r = 0; r < rows_per_type[t]; ++r) tables[t].push_back(perms[digits[d++]]);
    }
    if (!visit(CPNet(space, parents, std::move(tables)))) return;
    std::size_t pos = total_rows;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < perms.size()) break;
      digits[pos] = 0;
      if (pos == 0) return;
    }
    if (total_rows == 0) return;
  }
}

void for_each_linear_order(std::size_t universe, const std::function<bool(const LinearOrder&)>& visit) {
  LinearOrder order = LinearOrder::canonical(universe);
  do {
    if (!visit(order)) return;
  } while (std::next_permutation(order.sequence.begin(), order.sequence.end()));
}

}  // namespace mtra
