#include "mtra/generators.hpp"

#include <algorithm>
#include <numeric>

namespace mtra {

namespace {

constexpr std::string_view kTypeLetters = "FBCDEGHJKLMNPQRSTUVWXYZ";

std::size_t uniform_index(std::size_t bound, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

bool coin(double probability, std::mt19937_64& rng) { return std::bernoulli_distribution(probability)(rng); }

std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace

std::string_view profile_kind_name(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::General: return "general";
    case ProfileKind::CpNet: return "cpnet";
    case ProfileKind::IndependentCpNet: return "independent";
  }
  return "";
}

std::vector<TypeDef> standard_types(std::size_t agents, std::size_t types) {
  std::vector<TypeDef> out;
  for (std::size_t t = 0; t < types; ++t) {
    TypeDef def{std::string(1, kTypeLetters[t % kTypeLetters.size()]), {}};
    if (t >= kTypeLetters.size()) def.name += std::to_string(t / kTypeLetters.size());
    for (std::size_t i = 0; i < agents; ++i) def.items.push_back(std::to_string(i + 1) + def.name);
    out.push_back(std::move(def));
  }
  return out;
}

PartialOrder random_partial_order(std::size_t universe, double density, std::mt19937_64& rng) {
  const auto perm = random_permutation(universe, rng);
  std::vector<BundlePair> pairs;
  for (std::size_t i = 0; i < universe; ++i) {
    for (std::size_t j = i + 1; j < universe; ++j) {
      if (coin(density, rng)) pairs.emplace_back(perm[i], perm[j]);
    }
  }
  return PartialOrder::from_pairs(universe, pairs);
}

std::vector<std::vector<std::size_t>> random_dependency(std::size_t types, std::mt19937_64& rng) {
  const auto perm = random_permutation(types, rng);
  std::vector<std::vector<std::size_t>> parents(types);
  for (std::size_t i = 0; i < types; ++i) {
    for (std::size_t j = i + 1; j < types; ++j) {
      if (coin(0.5, rng)) parents[perm[j]].push_back(perm[i]);
    }
  }
  for (auto& p : parents) std::sort(p.begin(), p.end());
  return parents;
}

CPNet random_cpnet(const BundleSpace& space, std::vector<std::vector<std::size_t>> parents, std::mt19937_64& rng) {
  std::vector<std::vector<std::vector<std::size_t>>> tables(space.type_count());
  for (std::size_t t = 0; t < space.type_count(); ++t) {
    std::size_t rows = 1;
    for (std::size_t k = 0; k < parents[t].size(); ++k) rows *= space.items_per_type();
    for (std::size_t r = 0; r < rows; ++r) tables[t].push_back(random_permutation(space.items_per_type(), rng));
  }
  return CPNet(space, std::move(parents), std::move(tables));
}

Instance random_instance(std::size_t agents, std::size_t types, ProfileKind kind, std::mt19937_64& rng) {
  const BundleSpace space(agents, types);
  std::vector<AgentPreference> prefs;
  for (std::size_t j = 0; j < agents; ++j) {
    if (j > 0 && coin(0.25, rng)) {
      prefs.push_back(prefs[uniform_index(j, rng)]);
      continue;
    }
    switch (kind) {
      case ProfileKind::General: {
        static constexpr double kDensities[] = {0.0, 0.2, 0.5, 0.8, 1.0};
        prefs.push_back(AgentPreference::from_order(random_partial_order(space.size(), kDensities[uniform_index(5, rng)], rng)));
        break;
      }
      case ProfileKind::CpNet:
        prefs.push_back(AgentPreference::from_cpnet(random_cpnet(space, random_dependency(types, rng), rng)));
        break;
      case ProfileKind::IndependentCpNet:
        prefs.push_back(AgentPreference::from_cpnet(
            random_cpnet(space, std::vector<std::vector<std::size_t>>(types), rng)));
        break;
    }
  }
  return Instance(standard_types(agents, types), std::move(prefs));
}

}  // namespace mtra
