#include "mtra/instance.hpp"

#include "mtra/error.hpp"

#include <algorithm>
#include <set>

namespace mtra {

AgentPreference AgentPreference::from_cpnet(CPNet net) {
  PartialOrder order = induce_order(net);
  return {std::move(order), std::move(net)};
}

Instance::Instance(std::vector<TypeDef> types, std::vector<AgentPreference> preferences)
    : types_(std::move(types)), preferences_(std::move(preferences)) {
  const std::size_t n = preferences_.size();
  if (n == 0) throw Error(ErrorKind::MissingPreference, "an instance needs at least one agent");
  if (types_.empty()) throw Error(ErrorKind::TypeSizeMismatch, "an instance needs at least one type");
  std::set<std::string, std::less<>> type_names;
  for (std::size_t t = 0; t < types_.size(); ++t) {
    const auto& type = types_[t];
    if (!type_names.insert(type.name).second) {
      throw Error(ErrorKind::DuplicateItemName, "duplicate type name '" + type.name + "'");
    }
    if (type.items.size() != n) {
      throw Error(ErrorKind::TypeSizeMismatch, "type '" + type.name + "' has " +
                                                   std::to_string(type.items.size()) + " items but there are " +
                                                   std::to_string(n) + " agents");
    }
    for (std::size_t i = 0; i < type.items.size(); ++i) {
      if (type.items[i].empty()) throw Error(ErrorKind::Parse, "empty item name");
      if (!item_lookup_.emplace(type.items[i], std::make_pair(t, i)).second) {
        throw Error(ErrorKind::DuplicateItemName, "duplicate item name '" + type.items[i] + "'");
      }
    }
  }
  space_ = BundleSpace(n, types_.size());
  for (const auto& pref : preferences_) {
    if (pref.order.universe() != space_.size()) {
      throw Error(ErrorKind::UniverseMismatch, "preference is not over this instance's bundles");
    }
  }
}

bool Instance::is_cp_profile() const {
  return std::all_of(preferences_.begin(), preferences_.end(),
                     [](const AgentPreference& p) { return p.cpnet.has_value(); });
}

bool Instance::is_independent_cp_profile() const {
  return std::all_of(preferences_.begin(), preferences_.end(), [](const AgentPreference& p) {
    return p.cpnet.has_value() && p.cpnet->is_independent();
  });
}

std::string Instance::item_name(ItemIndex item) const {
  const std::size_t n = space_.items_per_type();
  return types_[item / n].items[item % n];
}

std::string Instance::bundle_name(BundleIndex bundle) const {
  std::string out;
  for (std::size_t t = 0; t < types_.size(); ++t) out += types_[t].items[space_.item_of(bundle, t)];
  return out;
}

std::optional<BundleIndex> Instance::find_bundle(std::string_view name) const {
  // Item names may have different lengths, so parse greedily type by type and
  // backtrack when a prefix match leads nowhere.
  std::vector<std::size_t> items(types_.size());
  auto match = [&](auto&& self, std::size_t type, std::size_t offset) -> bool {
    if (type == types_.size()) return offset == name.size();
    for (std::size_t i = 0; i < types_[type].items.size(); ++i) {
      const auto& item = types_[type].items[i];
      if (name.substr(offset, item.size()) == item) {
        items[type] = i;
        if (self(self, type + 1, offset + item.size())) return true;
      }
    }
    return false;
  };
  if (!match(match, 0, 0)) return std::nullopt;
  return space_.encode(items);
}

BundleIndex Instance::bundle_named(std::string_view name) const {
  auto b = find_bundle(name);
  if (!b) throw Error(ErrorKind::UnknownName, "unknown bundle '" + std::string(name) + "'");
  return *b;
}

std::optional<std::pair<std::size_t, std::size_t>> Instance::find_item(std::string_view name) const {
  auto it = item_lookup_.find(name);
  if (it == item_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Instance::find_type(std::string_view name) const {
  for (std::size_t t = 0; t < types_.size(); ++t) {
    if (types_[t].name == name) return t;
  }
  return std::nullopt;
}

Instance Instance::with_preference(AgentIndex agent, AgentPreference preference) const {
  Instance copy = *this;
  copy.preferences_.at(agent) = std::move(preference);
  return copy;
}

// ---- textual descriptions --------------------------------------------------

namespace {

std::size_t type_index(const std::vector<TypeDef>& types, const std::string& name) {
  for (std::size_t t = 0; t < types.size(); ++t) {
    if (types[t].name == name) return t;
  }
  throw Error(ErrorKind::UnknownName, "unknown type '" + name + "'");
}

std::size_t item_in_type(const TypeDef& type, const std::string& name) {
  auto it = std::find(type.items.begin(), type.items.end(), name);
  if (it == type.items.end()) {
    throw Error(ErrorKind::UnknownName, "item '" + name + "' is not of type '" + type.name + "'");
  }
  return static_cast<std::size_t>(it - type.items.begin());
}

// Parent-assignment key for row `row` of a type with the given (sorted) parents.
std::string parent_key_text(const std::vector<TypeDef>& types, const std::vector<std::size_t>& parents,
                            std::size_t row) {
  const std::size_t n = types.front().items.size();
  std::vector<std::size_t> digits(parents.size());
  for (std::size_t i = parents.size(); i-- > 0;) {
    digits[i] = row % n;
    row /= n;
  }
  std::string key;
  for (std::size_t i = 0; i < parents.size(); ++i) key += types[parents[i]].items[digits[i]];
  return key;
}

}  // namespace

CPNet build_cpnet(const std::vector<TypeDef>& types, const CpNetPreferenceSpec& spec) {
  const std::size_t p = types.size();
  const std::size_t n = types.front().items.size();
  std::vector<std::vector<std::size_t>> parents(p);
  for (const auto& [parent, child] : spec.dependency) {
    parents[type_index(types, child)].push_back(type_index(types, parent));
  }
  for (auto& pa : parents) std::sort(pa.begin(), pa.end());
  dependency_order(parents);
  for (const auto& [type_name, rows] : spec.cpt) {
    const auto t = type_index(types, type_name);
    std::size_t expected = 1;
    for (std::size_t i = 0; i < parents[t].size(); ++i) expected *= n;
    for (const auto& [key, ranking] : rows) {
      bool known = false;
      for (std::size_t r = 0; r < expected && !known; ++r) known = parent_key_text(types, parents[t], r) == key;
      if (!known) {
        throw Error(ErrorKind::UnknownName, "CPT of '" + type_name + "' has unknown parent assignment '" + key + "'");
      }
    }
  }
  std::vector<std::vector<std::vector<std::size_t>>> tables(p);
  for (std::size_t t = 0; t < p; ++t) {
    auto type_rows = spec.cpt.find(types[t].name);
    if (type_rows == spec.cpt.end()) {
      throw Error(ErrorKind::IncompleteCPT, "no CPT for type '" + types[t].name + "'");
    }
    std::size_t rows = 1;
    for (std::size_t i = 0; i < parents[t].size(); ++i) rows *= n;
    for (std::size_t r = 0; r < rows; ++r) {
      const auto key = parent_key_text(types, parents[t], r);
      auto row = type_rows->second.find(key);
      if (row == type_rows->second.end()) {
        throw Error(ErrorKind::IncompleteCPT,
                    "CPT of '" + types[t].name + "' misses parent assignment '" + key + "'");
      }
      std::vector<std::size_t> ranking;
      for (const auto& item : row->second) ranking.push_back(item_in_type(types[t], item));
      tables[t].push_back(std::move(ranking));
    }
  }
  return CPNet(BundleSpace(n, p), std::move(parents), std::move(tables));
}

Instance build_instance(const InstanceSpec& spec) {
  if (spec.agents == 0) throw Error(ErrorKind::MissingPreference, "agent count must be positive");
  if (spec.types.empty()) throw Error(ErrorKind::TypeSizeMismatch, "at least one type is required");
  std::set<std::string> names;
  for (const auto& type : spec.types) {
    if (type.items.size() != spec.agents) {
      throw Error(ErrorKind::TypeSizeMismatch, "type '" + type.name + "' has " + std::to_string(type.items.size()) +
                                                   " items but there are " + std::to_string(spec.agents) + " agents");
    }
    for (const auto& item : type.items) {
      if (!names.insert(item).second) throw Error(ErrorKind::DuplicateItemName, "duplicate item name '" + item + "'");
    }
  }
  if (spec.preferences.size() < spec.agents) {
    throw Error(ErrorKind::MissingPreference, "expected " + std::to_string(spec.agents) + " preferences, got " +
                                                  std::to_string(spec.preferences.size()));
  }
  if (spec.preferences.size() > spec.agents) {
    throw Error(ErrorKind::Parse, "more preferences than agents");
  }

  // A throwaway instance with empty orders gives us bundle-name resolution.
  const BundleSpace space(spec.agents, spec.types.size());
  const Instance names_only(spec.types, std::vector<AgentPreference>(spec.agents, AgentPreference::from_order(
                                                                                     PartialOrder(space.size()))));
  std::vector<AgentPreference> prefs;
  prefs.reserve(spec.agents);
  for (const auto& pref : spec.preferences) {
    if (const auto* partial = std::get_if<PartialPreferenceSpec>(&pref)) {
      std::vector<BundlePair> pairs;
      for (const auto& [better, worse] : partial->edges) {
        pairs.emplace_back(names_only.bundle_named(better), names_only.bundle_named(worse));
      }
      prefs.push_back(AgentPreference::from_order(PartialOrder::from_pairs(space.size(), pairs)));
    } else {
      prefs.push_back(AgentPreference::from_cpnet(build_cpnet(spec.types, std::get<CpNetPreferenceSpec>(pref))));
    }
  }
  return Instance(spec.types, std::move(prefs));
}

std::vector<Bundle> enumerate_bundles(const Instance& instance) {
  std::vector<Bundle> out;
  out.reserve(instance.bundle_count());
  for (BundleIndex b = 0; b < instance.bundle_count(); ++b) out.push_back(instance.space().decode(b));
  return out;
}

PreferenceSpec describe_preference(const Instance& instance, const AgentPreference& preference) {
  const auto& types = instance.types();
  if (preference.cpnet) {
    const auto& net = *preference.cpnet;
    CpNetPreferenceSpec spec;
    for (std::size_t t = 0; t < types.size(); ++t) {
      for (auto parent : net.parents(t)) spec.dependency.emplace_back(types[parent].name, types[t].name);
    }
    for (std::size_t t = 0; t < types.size(); ++t) {
      auto& rows = spec.cpt[types[t].name];
      for (std::size_t r = 0; r < net.row_count(t); ++r) {
        std::vector<std::string> ranking;
        for (auto item : net.ranking(t, r)) ranking.push_back(types[t].items[item]);
        rows[parent_key_text(types, net.parents(t), r)] = std::move(ranking);
      }
    }
    return spec;
  }
  PartialPreferenceSpec spec;
  for (const auto& [better, worse] : preference_graph(preference.order).edges) {
    spec.edges.emplace_back(instance.bundle_name(better), instance.bundle_name(worse));
  }
  return spec;
}

PreferenceSpec describe_preference(const Instance& instance, AgentIndex agent) {
  return describe_preference(instance, instance.preference(agent));
}

}  // namespace mtra
