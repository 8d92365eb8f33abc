#include "mtra/io.hpp"

#include "mtra/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace mtra {

using Json = nlohmann::ordered_json;

namespace {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

// Runs `body`, turning JSON type errors into Parse errors.
template <typename F>
auto guarded(std::string_view what, F&& body) {
  try {
    return body();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, std::string(what) + ": " + e.what());
  }
}

const Json& member(const Json& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) {
    throw Error(ErrorKind::Parse, std::string("missing field '") + key + "'");
  }
  return object.at(key);
}

std::size_t parse_agent_key(const std::string& key) {
  std::size_t pos = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(key, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != key.size() || value == 0) throw Error(ErrorKind::Parse, "agent keys are 1-based integers, got '" + key + "'");
  return value - 1;
}

std::vector<std::string> string_list(const Json& value) {
  return guarded("expected a list of names", [&] { return value.get<std::vector<std::string>>(); });
}

std::vector<std::pair<std::string, std::string>> name_pairs(const Json& value) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!value.is_array()) throw Error(ErrorKind::Parse, "expected a list of pairs");
  for (const auto& pair : value) {
    const auto names = string_list(pair);
    if (names.size() != 2) throw Error(ErrorKind::Parse, "pairs must have exactly two names");
    out.emplace_back(names[0], names[1]);
  }
  return out;
}

Json tiebreak_json(const TiebreakSpec& spec) {
  Json out = Json::object();
  if (spec.all) out["all"] = *spec.all;
  for (const auto& [agent, order] : spec.per_agent) out[std::to_string(agent + 1)] = order;
  return out;
}

TiebreakSpec tiebreak_from_json(const Json& value) {
  if (!value.is_object()) throw Error(ErrorKind::Parse, "tiebreak must be an object");
  TiebreakSpec spec;
  for (const auto& [key, order] : value.items()) {
    if (key == "all") {
      spec.all = string_list(order);
    } else {
      spec.per_agent[parse_agent_key(key)] = string_list(order);
    }
  }
  return spec;
}

Json preference_json(const PreferenceSpec& pref) {
  Json out = Json::object();
  if (const auto* partial = std::get_if<PartialPreferenceSpec>(&pref)) {
    out["kind"] = "partial";
    out["edges"] = Json::array();
    for (const auto& [better, worse] : partial->edges) out["edges"].push_back({better, worse});
  } else {
    const auto& net = std::get<CpNetPreferenceSpec>(pref);
    out["kind"] = "cpnet";
    out["dependency"] = Json::array();
    for (const auto& [parent, child] : net.dependency) out["dependency"].push_back({parent, child});
    out["cpt"] = Json::object();
    for (const auto& [type, rows] : net.cpt) {
      Json table = Json::object();
      for (const auto& [key, ranking] : rows) table[key] = ranking;
      out["cpt"][type] = std::move(table);
    }
  }
  return out;
}

PreferenceSpec preference_from_json(const Json& value) {
  const auto kind = guarded("preference kind", [&] { return member(value, "kind").get<std::string>(); });
  if (kind == "partial") {
    return PartialPreferenceSpec{name_pairs(member(value, "edges"))};
  }
  if (kind == "cpnet") {
    CpNetPreferenceSpec net;
    if (value.contains("dependency")) net.dependency = name_pairs(value.at("dependency"));
    const auto& cpt = member(value, "cpt");
    if (!cpt.is_object()) throw Error(ErrorKind::Parse, "cpt must be an object");
    for (const auto& [type, rows] : cpt.items()) {
      if (!rows.is_object()) throw Error(ErrorKind::Parse, "cpt rows of type '" + type + "' must be an object");
      for (const auto& [key, ranking] : rows.items()) net.cpt[type][key] = string_list(ranking);
    }
    return net;
  }
  throw Error(ErrorKind::Parse, "unknown preference kind '" + kind + "'");
}

LinearOrder order_from_names(const Instance& instance, const std::vector<std::string>& names) {
  LinearOrder order;
  for (const auto& name : names) order.sequence.push_back(instance.bundle_named(name));
  if (!order.is_permutation_of(instance.bundle_count())) {
    throw Error(ErrorKind::UniverseMismatch, "a tiebreak must list every bundle exactly once");
  }
  return order;
}

}  // namespace

Tiebreaks resolve_tiebreaks(const Instance& instance, const TiebreakSpec& spec) {
  const auto fallback =
      spec.all ? order_from_names(instance, *spec.all) : LinearOrder::canonical(instance.bundle_count());
  auto tiebreaks = Tiebreaks::uniform(instance.agent_count(), fallback);
  for (const auto& [agent, names] : spec.per_agent) {
    if (agent >= instance.agent_count()) {
      throw Error(ErrorKind::UnknownName, "tiebreak for agent " + std::to_string(agent + 1) + " which does not exist");
    }
    tiebreaks.per_agent[agent] = order_from_names(instance, names);
  }
  return tiebreaks;
}

InstanceDocument parse_instance_document(std::string_view text) {
  const Json root = parse_json(text);
  InstanceDocument doc;
  doc.spec.agents = guarded("agents", [&] { return member(root, "agents").get<std::size_t>(); });
  const auto& types = member(root, "types");
  if (!types.is_array()) throw Error(ErrorKind::Parse, "types must be a list");
  for (const auto& type : types) {
    TypeDef def;
    def.name = guarded("type name", [&] { return member(type, "name").get<std::string>(); });
    def.items = string_list(member(type, "items"));
    doc.spec.types.push_back(std::move(def));
  }
  const auto& prefs = member(root, "preferences");
  if (!prefs.is_array()) throw Error(ErrorKind::Parse, "preferences must be a list");
  for (const auto& pref : prefs) doc.spec.preferences.push_back(preference_from_json(pref));
  if (root.contains("tiebreak")) doc.tiebreak = tiebreak_from_json(root.at("tiebreak"));
  return doc;
}

std::string serialize_instance_document(const InstanceDocument& document) {
  Json root = Json::object();
  root["agents"] = document.spec.agents;
  root["types"] = Json::array();
  for (const auto& type : document.spec.types) root["types"].push_back({{"name", type.name}, {"items", type.items}});
  root["preferences"] = Json::array();
  for (const auto& pref : document.spec.preferences) root["preferences"].push_back(preference_json(pref));
  if (!document.tiebreak.empty()) root["tiebreak"] = tiebreak_json(document.tiebreak);
  return root.dump(2) + "\n";
}

InstanceSpec describe_instance(const Instance& instance) {
  InstanceSpec spec{instance.agent_count(), instance.types(), {}};
  for (AgentIndex j = 0; j < instance.agent_count(); ++j) spec.preferences.push_back(describe_preference(instance, j));
  return spec;
}

TiebreakSpec parse_tiebreak_document(std::string_view text) { return tiebreak_from_json(parse_json(text)); }

std::string serialize_tiebreak_document(const TiebreakSpec& spec) { return tiebreak_json(spec).dump(2) + "\n"; }

AssignmentDocument parse_assignment_document(std::string_view text, const Instance& instance) {
  const Json root = parse_json(text);
  AssignmentDocument doc;
  if (root.contains("mechanism")) doc.metadata.mechanism = guarded("mechanism", [&] { return root.at("mechanism").get<std::string>(); });
  if (root.contains("mode")) doc.metadata.mode = guarded("mode", [&] { return root.at("mode").get<std::string>(); });
  if (root.contains("seed") && !root.at("seed").is_null()) {
    doc.metadata.seed = guarded("seed", [&] { return root.at("seed").get<std::uint64_t>(); });
  }
  if (root.contains("samples") && !root.at("samples").is_null()) {
    doc.metadata.samples = guarded("samples", [&] { return root.at("samples").get<std::size_t>(); });
  }
  if (root.contains("tiebreak")) doc.metadata.tiebreak = tiebreak_from_json(root.at("tiebreak"));

  const auto& shares = member(root, "shares");
  if (!shares.is_object()) throw Error(ErrorKind::Parse, "shares must be an object keyed by agent");
  doc.assignment = FractionalAssignment(instance.agent_count(), instance.bundle_count());
  std::set<AgentIndex> seen;
  for (const auto& [key, row] : shares.items()) {
    const auto agent = parse_agent_key(key);
    if (agent >= instance.agent_count()) {
      throw Error(ErrorKind::DimensionMismatch, "shares for agent " + key + " which does not exist");
    }
    seen.insert(agent);
    if (!row.is_object()) throw Error(ErrorKind::Parse, "row of agent " + key + " must be an object");
    for (const auto& [bundle, value] : row.items()) {
      const auto text_value = guarded("share", [&] { return value.get<std::string>(); });
      doc.assignment.at(agent, instance.bundle_named(bundle)) = parse_rational(text_value);
    }
  }
  if (seen.size() != instance.agent_count()) {
    throw Error(ErrorKind::DimensionMismatch, "shares must list every agent");
  }
  return doc;
}

std::string serialize_assignment_document(const AssignmentDocument& document, const Instance& instance) {
  const auto& a = document.assignment;
  if (a.agent_count() != instance.agent_count() || a.bundle_count() != instance.bundle_count()) {
    throw Error(ErrorKind::DimensionMismatch, "assignment shape does not match the instance");
  }
  Json root = Json::object();
  const auto& meta = document.metadata;
  if (!meta.mechanism.empty()) root["mechanism"] = meta.mechanism;
  if (!meta.mode.empty()) root["mode"] = meta.mode;
  if (meta.seed) root["seed"] = *meta.seed;
  if (meta.samples) root["samples"] = *meta.samples;
  if (!meta.tiebreak.empty()) root["tiebreak"] = tiebreak_json(meta.tiebreak);
  Json shares = Json::object();
  for (AgentIndex j = 0; j < a.agent_count(); ++j) {
    Json row = Json::object();
    for (BundleIndex x = 0; x < a.bundle_count(); ++x) row[instance.bundle_name(x)] = to_string(a.at(j, x));
    shares[std::to_string(j + 1)] = std::move(row);
  }
  root["shares"] = std::move(shares);
  return root.dump(2) + "\n";
}

std::string serialize_lottery(const Lottery& lottery, const Instance& instance,
                              const std::vector<std::vector<AgentIndex>>& priorities) {
  Json outcomes = Json::array();
  for (std::size_t i = 0; i < lottery.outcomes.size(); ++i) {
    const auto& outcome = lottery.outcomes[i];
    Json entry = Json::object();
    entry["probability"] = to_string(outcome.probability);
    if (i < priorities.size()) {
      Json order = Json::array();
      for (auto agent : priorities[i]) order.push_back(agent + 1);
      entry["priority"] = std::move(order);
    }
    Json assignment = Json::object();
    for (AgentIndex j = 0; j < outcome.assignment.bundle_of.size(); ++j) {
      assignment[std::to_string(j + 1)] = instance.bundle_name(outcome.assignment.bundle_of[j]);
    }
    entry["assignment"] = std::move(assignment);
    outcomes.push_back(std::move(entry));
  }
  Json root = Json::object();
  root["lottery"] = std::move(outcomes);
  return root.dump(2) + "\n";
}

Lottery parse_lottery(std::string_view text, const Instance& instance) {
  const Json root = parse_json(text);
  const auto& outcomes = member(root, "lottery");
  if (!outcomes.is_array()) throw Error(ErrorKind::Parse, "lottery must be a list");
  Lottery lottery;
  for (const auto& entry : outcomes) {
    LotteryOutcome outcome;
    outcome.probability =
        parse_rational(guarded("probability", [&] { return member(entry, "probability").get<std::string>(); }));
    outcome.assignment.bundle_of.assign(instance.agent_count(), 0);
    const auto& assignment = member(entry, "assignment");
    if (!assignment.is_object() || assignment.size() != instance.agent_count()) {
      throw Error(ErrorKind::DimensionMismatch, "each outcome must assign a bundle to every agent");
    }
    for (const auto& [key, bundle] : assignment.items()) {
      const auto agent = parse_agent_key(key);
      if (agent >= instance.agent_count()) throw Error(ErrorKind::DimensionMismatch, "unknown agent " + key);
      outcome.assignment.bundle_of[agent] =
          instance.bundle_named(guarded("bundle", [&] { return bundle.get<std::string>(); }));
    }
    lottery.outcomes.push_back(std::move(outcome));
  }
  return lottery;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Instance load_instance(const std::filesystem::path& path, TiebreakSpec* tiebreak) {
  auto doc = parse_instance_document(read_text_file(path));
  if (tiebreak) *tiebreak = doc.tiebreak;
  return build_instance(doc.spec);
}

}  // namespace mtra
