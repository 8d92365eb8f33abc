#pragma once

#include "mtra/bundle.hpp"
#include "mtra/preferences.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mtra {

struct TypeDef {
  std::string name;
  std::vector<std::string> items;

  bool operator==(const TypeDef&) const = default;
};

// Textual preference descriptions, as they appear in an instance file.
struct PartialPreferenceSpec {
  std::vector<std::pair<std::string, std::string>> edges;  // (better, worse) bundle names
};

struct CpNetPreferenceSpec {
  std::vector<std::pair<std::string, std::string>> dependency;  // (parent, child) type names
  // type name -> parent-assignment key -> ranked item names. The key is the
  // concatenation of the parents' item names in type order ("" without parents).
  std::map<std::string, std::map<std::string, std::vector<std::string>>> cpt;
};

using PreferenceSpec = std::variant<PartialPreferenceSpec, CpNetPreferenceSpec>;

struct InstanceSpec {
  std::size_t agents = 0;
  std::vector<TypeDef> types;
  std::vector<PreferenceSpec> preferences;
};

// An agent's strict preference; `cpnet` is set when it was given compactly.
struct AgentPreference {
  PartialOrder order;
  std::optional<CPNet> cpnet;

  static AgentPreference from_order(PartialOrder order) { return {std::move(order), std::nullopt}; }
  static AgentPreference from_cpnet(CPNet net);

  bool operator==(const AgentPreference& other) const { return order == other.order; }
};

// Square multi-type allocation instance: n agents, p types, n items per type.
class Instance {
 public:
  Instance(std::vector<TypeDef> types, std::vector<AgentPreference> preferences);

  std::size_t agent_count() const { return preferences_.size(); }
  const BundleSpace& space() const { return space_; }
  std::size_t bundle_count() const { return space_.size(); }
  const std::vector<TypeDef>& types() const { return types_; }

  const AgentPreference& preference(AgentIndex agent) const { return preferences_[agent]; }
  const PartialOrder& order(AgentIndex agent) const { return preferences_[agent].order; }
  const std::vector<AgentPreference>& preferences() const { return preferences_; }
  bool is_cp_profile() const;
  bool is_independent_cp_profile() const;

  std::string item_name(ItemIndex item) const;
  std::string bundle_name(BundleIndex bundle) const;
  std::optional<BundleIndex> find_bundle(std::string_view name) const;
  BundleIndex bundle_named(std::string_view name) const;  // throws UnknownName
  std::optional<std::pair<std::size_t, std::size_t>> find_item(std::string_view name) const;
  std::optional<std::size_t> find_type(std::string_view name) const;

  // Same instance with one agent's report replaced.
  Instance with_preference(AgentIndex agent, AgentPreference preference) const;

 private:
  std::vector<TypeDef> types_;
  std::vector<AgentPreference> preferences_;
  BundleSpace space_;
  std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>> item_lookup_;
};

// Validates a textual description: DuplicateItemName, TypeSizeMismatch,
// MissingPreference, UnknownName, CyclicPreference, CyclicDependency, IncompleteCPT.
Instance build_instance(const InstanceSpec& spec);

// All n^p bundles in canonical order.
std::vector<Bundle> enumerate_bundles(const Instance& instance);

// Textual form of a stored preference (used by serialization).
PreferenceSpec describe_preference(const Instance& instance, AgentIndex agent);
PreferenceSpec describe_preference(const Instance& instance, const AgentPreference& preference);

// Builds a CP-net from its textual description against the instance's types.
CPNet build_cpnet(const std::vector<TypeDef>& types, const CpNetPreferenceSpec& spec);

}  // namespace mtra
