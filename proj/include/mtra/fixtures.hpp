#pragma once

#include "mtra/assignment.hpp"
#include "mtra/instance.hpp"
#include "mtra/io.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mtra {

// Per agent: (bundle name, "num/den") for every nonzero share.
using ShareTable = std::vector<std::vector<std::pair<std::string, std::string>>>;

FractionalAssignment assignment_from_table(const Instance& instance, const ShareTable& table);

// Reference instances.
namespace reference {

// Two agents, types F and B. Agent 1: CP-net F -> B ranking 1F over 2F, 1B
// with 1F and 2B with 2F. Agent 2: 1F2B below every other bundle.
Instance two_agent();
// Both agents hold agent 2's preference from two_agent().
Instance twin_partial();
// Both agents hold agent 1's linear order from two_agent().
Instance twin_linear();
// Shared dependency F -> B. Agent 1: 1F over 2F, 2B over 1B with 1F, 1B over
// 2B with 2F. Agent 2: agent 1 of two_agent().
Instance shared_graph();
// One type, three agents: 1F>2F>3F, 3F>2F>1F, and the empty preference.
Instance three_agent_empty();
// One type, two agents: the empty preference and 1F>2F.
Instance two_agent_empty();
// One type, three agents: 1F>2F>3F, 1F>3F>2F, 3F>1F>2F.
Instance three_agent_linear();

// Tiebreaks for agent 2 of two_agent(): "A" yields 2F1B first, "B" 1F1B first.
TiebreakSpec sort_a();
TiebreakSpec sort_b();

}  // namespace reference

struct Fixture {
  std::string name;
  std::string summary;
  // Returns one line per divergence; empty when the fixture reproduces.
  std::function<std::vector<std::string>()> run;
};

// Compares a computed assignment with an expected table entry by entry.
Fixture assignment_fixture(std::string name, std::string summary, Instance instance,
                           std::function<FractionalAssignment(const Instance&)> compute, ShareTable expected);

std::vector<Fixture> reference_fixtures();

// Prints a pass/fail table; on the first divergence prints its details and
// stops. Returns true iff every fixture reproduced.
bool replay(std::span<const Fixture> fixtures, std::ostream& out);
void list_fixtures(std::span<const Fixture> fixtures, std::ostream& out);

}  // namespace mtra
