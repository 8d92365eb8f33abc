#pragma once

#include "mtra/assignment.hpp"
#include "mtra/instance.hpp"
#include "mtra/mechanisms.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtra {

// Tiebreak orders by bundle name. `all` applies to every agent; `per_agent`
// (0-based here, 1-based in files) overrides it. Unmentioned agents use the
// canonical order.
struct TiebreakSpec {
  std::optional<std::vector<std::string>> all;
  std::map<AgentIndex, std::vector<std::string>> per_agent;

  bool empty() const { return !all && per_agent.empty(); }
  bool operator==(const TiebreakSpec&) const = default;
};

Tiebreaks resolve_tiebreaks(const Instance& instance, const TiebreakSpec& spec);

struct InstanceDocument {
  InstanceSpec spec;
  TiebreakSpec tiebreak;
};

// Throws Error(Parse) on malformed documents; semantic validation happens in
// build_instance.
InstanceDocument parse_instance_document(std::string_view text);
std::string serialize_instance_document(const InstanceDocument& document);

// Textual description of a built instance.
InstanceSpec describe_instance(const Instance& instance);

TiebreakSpec parse_tiebreak_document(std::string_view text);
std::string serialize_tiebreak_document(const TiebreakSpec& spec);

struct AssignmentMetadata {
  std::string mechanism;  // empty when unknown
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  TiebreakSpec tiebreak;

  bool operator==(const AssignmentMetadata&) const = default;
};

struct AssignmentDocument {
  AssignmentMetadata metadata;
  FractionalAssignment assignment;
};

// Shares are "num/den" strings keyed by 1-based agent and bundle name;
// missing bundles are zero.
AssignmentDocument parse_assignment_document(std::string_view text, const Instance& instance);
std::string serialize_assignment_document(const AssignmentDocument& document, const Instance& instance);

std::string serialize_lottery(const Lottery& lottery, const Instance& instance,
                              const std::vector<std::vector<AgentIndex>>& priorities = {});
Lottery parse_lottery(std::string_view text, const Instance& instance);

std::string read_text_file(const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path, TiebreakSpec* tiebreak = nullptr);

}  // namespace mtra
