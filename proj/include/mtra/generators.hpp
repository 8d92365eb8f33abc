#pragma once

#include "mtra/instance.hpp"

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mtra {

enum class ProfileKind { General, CpNet, IndependentCpNet };

std::string_view profile_kind_name(ProfileKind kind);

// Types named F, B, C, D, ... with items "1F", "2F", ...
std::vector<TypeDef> standard_types(std::size_t agents, std::size_t types);

// Random strict partial order: pairs consistent with a random permutation,
// each kept with probability `density`.
PartialOrder random_partial_order(std::size_t universe, double density, std::mt19937_64& rng);

// Random acyclic dependency graph over `types` (edges only from lower to
// higher positions of a random type permutation).
std::vector<std::vector<std::size_t>> random_dependency(std::size_t types, std::mt19937_64& rng);

CPNet random_cpnet(const BundleSpace& space, std::vector<std::vector<std::size_t>> parents, std::mt19937_64& rng);

// Random instance of the given kind. General profiles occasionally contain
// empty or linear orders and duplicated agents, so ties in sorts and equal
// preferences are exercised.
Instance random_instance(std::size_t agents, std::size_t types, ProfileKind kind, std::mt19937_64& rng);

}  // namespace mtra
