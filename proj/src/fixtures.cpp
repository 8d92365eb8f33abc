#include "mtra/fixtures.hpp"

#include "mtra/axioms.hpp"
#include "mtra/error.hpp"
#include "mtra/generators.hpp"
#include "mtra/mechanisms.hpp"

#include <algorithm>
#include <ostream>

namespace mtra {

FractionalAssignment assignment_from_table(const Instance& instance, const ShareTable& table) {
  if (table.size() != instance.agent_count()) {
    throw Error(ErrorKind::DimensionMismatch, "share table needs one row per agent");
  }
  FractionalAssignment out(instance.agent_count(), instance.bundle_count());
  for (AgentIndex j = 0; j < table.size(); ++j) {
    for (const auto& [bundle, value] : table[j]) out.at(j, instance.bundle_named(bundle)) = parse_rational(value);
  }
  return out;
}

namespace reference {

namespace {

PreferenceSpec chain(std::vector<std::string> names) {
  PartialPreferenceSpec spec;
  for (std::size_t i = 0; i + 1 < names.size(); ++i) spec.edges.emplace_back(names[i], names[i + 1]);
  return spec;
}

PreferenceSpec below_all(const std::string& worst, const std::vector<std::string>& others) {
  PartialPreferenceSpec spec;
  for (const auto& b : others) spec.edges.emplace_back(b, worst);
  return spec;
}

PreferenceSpec food_then_drink(std::vector<std::string> food, std::vector<std::string> with_1f,
                               std::vector<std::string> with_2f) {
  CpNetPreferenceSpec spec;
  spec.dependency = {{"F", "B"}};
  spec.cpt["F"][""] = std::move(food);
  spec.cpt["B"]["1F"] = std::move(with_1f);
  spec.cpt["B"]["2F"] = std::move(with_2f);
  return spec;
}

PreferenceSpec agent_one_of_two_agent() { return food_then_drink({"1F", "2F"}, {"1B", "2B"}, {"2B", "1B"}); }
PreferenceSpec agent_two_of_two_agent() { return below_all("1F2B", {"1F1B", "2F1B", "2F2B"}); }

Instance build(std::size_t agents, std::size_t types, std::vector<PreferenceSpec> prefs) {
  return build_instance(InstanceSpec{agents, standard_types(agents, types), std::move(prefs)});
}

}  // namespace

Instance two_agent() { return build(2, 2, {agent_one_of_two_agent(), agent_two_of_two_agent()}); }
Instance twin_partial() { return build(2, 2, {agent_two_of_two_agent(), agent_two_of_two_agent()}); }
Instance twin_linear() { return build(2, 2, {agent_one_of_two_agent(), agent_one_of_two_agent()}); }
Instance shared_graph() {
  return build(2, 2, {food_then_drink({"1F", "2F"}, {"2B", "1B"}, {"1B", "2B"}), agent_one_of_two_agent()});
}
Instance three_agent_empty() {
  return build(3, 1, {chain({"1F", "2F", "3F"}), chain({"3F", "2F", "1F"}), PartialPreferenceSpec{}});
}
Instance two_agent_empty() { return build(2, 1, {PartialPreferenceSpec{}, chain({"1F", "2F"})}); }
Instance three_agent_linear() {
  return build(3, 1, {chain({"1F", "2F", "3F"}), chain({"1F", "3F", "2F"}), chain({"3F", "1F", "2F"})});
}

TiebreakSpec sort_a() { return TiebreakSpec{std::nullopt, {{1, {"2F1B", "1F1B", "2F2B", "1F2B"}}}}; }
TiebreakSpec sort_b() { return TiebreakSpec{std::nullopt, {{1, {"1F1B", "2F2B", "2F1B", "1F2B"}}}}; }

}  // namespace reference

namespace {

const ShareTable kSeparate = {{{"1F1B", "1/2"}, {"1F2B", "1/2"}}, {{"2F1B", "1/2"}, {"2F2B", "1/2"}}};
const ShareTable kDiagonal = {{{"1F1B", "1/2"}, {"2F2B", "1/2"}}, {{"1F1B", "1/2"}, {"2F2B", "1/2"}}};
const ShareTable kCrossed = {{{"1F2B", "1/2"}, {"2F1B", "1/2"}}, {{"1F1B", "1/2"}, {"2F2B", "1/2"}}};
const ShareTable kAntiDiagonal = {{{"1F2B", "1/2"}, {"2F1B", "1/2"}}, {{"1F2B", "1/2"}, {"2F1B", "1/2"}}};
const ShareTable kUniform3 = {{{"1F", "1/3"}, {"2F", "1/3"}, {"3F", "1/3"}},
                              {{"1F", "1/3"}, {"2F", "1/3"}, {"3F", "1/3"}},
                              {{"1F", "1/3"}, {"2F", "1/3"}, {"3F", "1/3"}}};
const ShareTable kSkewed3 = {{{"1F", "2/3"}, {"2F", "1/3"}},
                             {{"2F", "1/3"}, {"3F", "2/3"}},
                             {{"1F", "1/3"}, {"2F", "1/3"}, {"3F", "1/3"}}};

class Checks {
 public:
  void expect(bool condition, std::string message) {
    if (!condition) failures_.push_back(std::move(message));
  }
  std::vector<std::string> take() { return std::move(failures_); }

 private:
  std::vector<std::string> failures_;
};

std::vector<std::string> diff(const Instance& instance, const FractionalAssignment& actual,
                              const FractionalAssignment& expected) {
  std::vector<std::string> out;
  for (AgentIndex j = 0; j < instance.agent_count(); ++j) {
    for (BundleIndex x = 0; x < instance.bundle_count(); ++x) {
      if (actual.at(j, x) != expected.at(j, x)) {
        out.push_back("agent " + std::to_string(j + 1) + " " + instance.bundle_name(x) + ": got " +
                      to_string(actual.at(j, x)) + ", expected " + to_string(expected.at(j, x)));
      }
    }
  }
  return out;
}

std::function<FractionalAssignment(const Instance&)> with(Mechanism mechanism, TiebreakSpec tiebreak) {
  return [mechanism, tiebreak](const Instance& instance) {
    return run_mechanism(mechanism, instance, resolve_tiebreaks(instance, tiebreak));
  };
}

TiebreakSpec uniform_sort(std::vector<std::string> order) { return TiebreakSpec{std::move(order), {}}; }

std::vector<std::string> dominance_table() {
  const auto instance = reference::two_agent();
  const auto separate = assignment_from_table(instance, kSeparate);
  const auto diagonal = assignment_from_table(instance, kDiagonal);
  const auto crossed = assignment_from_table(instance, kCrossed);
  Checks c;
  const auto w1 = sd_compare(instance.order(0), diagonal.row(0), crossed.row(0));
  c.expect(w1.p_dominates_q && !w1.q_dominates_p, "diagonal shares should strictly dominate crossed shares for agent 1");
  const auto w2 = sd_compare(instance.order(1), diagonal.row(1), crossed.row(1));
  c.expect(w2.p_dominates_q, "diagonal shares should dominate crossed shares for agent 2");
  const auto v = sd_compare(instance.order(1), separate.row(1), diagonal.row(1));
  c.expect(!v.q_dominates_p, "diagonal shares should not dominate separate shares for agent 2");
  c.expect(!v.p_dominates_q, "separate shares should not dominate diagonal shares for agent 2");
  const auto u = sd_compare(instance.order(0), separate.row(0), diagonal.row(0));
  c.expect(u.p_dominates_q && !u.q_dominates_p, "separate shares should dominate diagonal shares for agent 1");
  return c.take();
}

std::vector<std::string> improvable_crossed() {
  const auto instance = reference::two_agent();
  const auto crossed = assignment_from_table(instance, kCrossed);
  Checks c;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& t : improvable_tuples(instance, crossed)) {
    pairs.emplace_back(instance.bundle_name(t.better), instance.bundle_name(t.worse));
  }
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"1F1B", "1F2B"}, {"1F1B", "2F1B"}, {"1F2B", "2F1B"}, {"2F2B", "2F1B"}};
  c.expect(pairs == expected, "improvable tuples differ from the four expected pairs");
  c.expect(find_generalized_cycle(instance, crossed).has_value(), "a generalized cycle should exist");
  c.expect(!check_sd_efficiency(instance, crossed).pass, "crossed shares should be sd-inefficient");
  return c.take();
}

std::vector<std::string> shared_graph_eating() {
  const auto instance = reference::shared_graph();
  const auto shares = run_mechanism(Mechanism::Mps, instance, Tiebreaks::canonical(instance));
  auto out = diff(instance, shares, assignment_from_table(instance, kCrossed));
  Checks c;
  c.expect(!check_decomposability(instance, shares).pass, "eating outcome should not be decomposable");
  c.expect(!check_ex_post_efficiency(instance, shares).pass, "eating outcome should not be ex-post efficient");
  c.expect(check_sd_efficiency(instance, shares).pass, "eating outcome should be sd-efficient");
  for (auto& f : c.take()) out.push_back(std::move(f));
  return out;
}

std::vector<std::string> envy_free_uniform() {
  const auto instance = reference::three_agent_empty();
  const auto uniform = assignment_from_table(instance, kUniform3);
  const auto skewed = assignment_from_table(instance, kSkewed3);
  Checks c;
  c.expect(check_envy(instance, uniform, EnvyStrength::Strong).pass, "uniform shares should be sd-envy-free");
  c.expect(!check_sd_efficiency(instance, uniform).pass, "uniform shares should be sd-inefficient");
  for (AgentIndex j = 0; j < 3; ++j) {
    c.expect(sd_compare(instance.order(j), skewed.row(j), uniform.row(j)).p_dominates_q,
             "skewed shares should dominate uniform shares for agent " + std::to_string(j + 1));
  }
  return c.take();
}

std::vector<std::string> priority_misreport() {
  const auto instance = reference::two_agent_empty();
  const auto tiebreaks = Tiebreaks::canonical(instance);
  auto out = diff(instance, run_mechanism(Mechanism::Mrp, instance, tiebreaks),
                  assignment_from_table(instance, {{{"1F", "1/2"}, {"2F", "1/2"}}, {{"1F", "1/2"}, {"2F", "1/2"}}}));
  const auto lie = AgentPreference::from_order(PartialOrder::from_sequence(2, std::vector<BundleIndex>{1, 0}));
  const auto lied = instance.with_preference(0, lie);
  for (auto& d : diff(lied, run_mechanism(Mechanism::Mrp, lied, tiebreaks),
                      assignment_from_table(lied, {{{"2F", "1"}}, {{"1F", "1"}}}))) {
    out.push_back("misreport: " + d);
  }
  const std::vector<Tiebreaks> sets{tiebreaks};
  Checks c;
  c.expect(!check_strategyproofness(Mechanism::Mrp, instance, MisreportSpace::explicit_list({{0, lie}}),
                                    SpStrength::Sd, sets)
                .pass,
           "the misreport should break sd-strategyproofness");
  const auto transform = TransformSource::explicit_list({Transform{0, lie, 1}});
  c.expect(!check_upper_invariance(Mechanism::Mrp, instance, transform, sets).pass,
           "the misreport should break upper invariance for priority");
  c.expect(!check_upper_invariance(Mechanism::Mps, instance, transform, sets).pass,
           "the misreport should break upper invariance for eating");
  for (auto& f : c.take()) out.push_back(std::move(f));
  return out;
}

std::vector<std::string> eating_empty_preference() {
  const auto instance = reference::two_agent_empty();
  const auto shares = run_mechanism(Mechanism::Mps, instance,
                                    resolve_tiebreaks(instance, TiebreakSpec{std::nullopt, {{0, {"2F", "1F"}}}}));
  auto out = diff(instance, shares, assignment_from_table(instance, {{{"2F", "1"}}, {{"1F", "1"}}}));
  Checks c;
  c.expect(!check_ordinal_fairness(instance, shares).pass, "outcome should not be ordinally fair");
  c.expect(!check_envy(instance, shares, EnvyStrength::Strong).pass, "outcome should not be sd-envy-free");
  c.expect(check_envy(instance, shares, EnvyStrength::Weak).pass, "outcome should be weakly sd-envy-free");
  for (auto& f : c.take()) out.push_back(std::move(f));
  return out;
}

std::vector<std::string> dictatorship_mimicry() {
  const auto instance = reference::three_agent_linear();
  const auto tiebreaks = Tiebreaks::canonical(instance);
  const auto shares = run_mechanism(Mechanism::Mgd, instance, tiebreaks);
  auto out = diff(instance, shares, assignment_from_table(instance, {{{"1F", "1"}}, {{"3F", "1"}}, {{"2F", "1"}}}));
  Checks c;
  const auto envy = check_envy(instance, shares, EnvyStrength::Weak);
  c.expect(!envy.pass, "outcome should not be weakly sd-envy-free");
  const auto fairness = check_ordinal_fairness(instance, shares);
  c.expect(!fairness.pass, "outcome should not be ordinally fair");
  if (!fairness.pass) {
    const auto& v = std::get<FairnessViolation>(*fairness.witness);
    c.expect(v.bundle == 0 && v.agent == 0 && v.other == 1, "fairness violation should be at 1F between agents 1 and 2");
  }
  const auto mimic = instance.preference(0);
  const auto lied = instance.with_preference(2, mimic);
  for (auto& d : diff(lied, run_mechanism(Mechanism::Mgd, lied, tiebreaks),
                      assignment_from_table(lied, {{{"1F", "1/2"}, {"2F", "1/2"}},
                                                   {{"3F", "1"}},
                                                   {{"1F", "1/2"}, {"2F", "1/2"}}}))) {
    out.push_back("mimicry: " + d);
  }
  const std::vector<Tiebreaks> sets{tiebreaks};
  c.expect(!check_strategyproofness(Mechanism::Mgd, instance, MisreportSpace::explicit_list({{2, mimic}}),
                                    SpStrength::Weak, sets)
                .pass,
           "mimicry should break weak sd-strategyproofness");
  c.expect(is_uit(instance.order(2), mimic.order, 1, shares.row(2)).valid,
           "mimicry should be an upper invariant transformation at 2F");
  c.expect(!check_upper_invariance(Mechanism::Mgd, instance, TransformSource::explicit_list({Transform{2, mimic, 1}}),
                                   sets)
                .pass,
           "mimicry should break upper invariance");
  for (auto& f : c.take()) out.push_back(std::move(f));
  return out;
}

std::vector<std::string> ordinal_fair_not_eating() {
  const auto instance = reference::twin_linear();
  const auto anti = assignment_from_table(instance, kAntiDiagonal);
  Checks c;
  c.expect(check_ordinal_fairness(instance, anti).pass, "anti-diagonal shares should be ordinally fair");
  const auto eaten = run_mechanism(Mechanism::Mps, instance, Tiebreaks::canonical(instance));
  c.expect(eaten == assignment_from_table(instance, kDiagonal), "eating should give the diagonal shares");
  c.expect(eaten != anti, "eating should differ from the anti-diagonal shares");
  return c.take();
}

}  // namespace

Fixture assignment_fixture(std::string name, std::string summary, Instance instance,
                           std::function<FractionalAssignment(const Instance&)> compute, ShareTable expected) {
  auto run = [instance = std::move(instance), compute = std::move(compute), expected = std::move(expected)] {
    return diff(instance, compute(instance), assignment_from_table(instance, expected));
  };
  return Fixture{std::move(name), std::move(summary), std::move(run)};
}

std::vector<Fixture> reference_fixtures() {
  using namespace reference;
  std::vector<Fixture> out;
  out.push_back({"dominance-table", "sd comparisons between separate, diagonal and crossed shares", dominance_table});
  out.push_back(assignment_fixture("eating-sort-a", "eating with agent 2 sorting 2F1B first", two_agent(),
                                   with(Mechanism::Mps, sort_a()), kSeparate));
  out.push_back(assignment_fixture("eating-sort-b", "eating with agent 2 sorting 1F1B first", two_agent(),
                                   with(Mechanism::Mps, sort_b()), kDiagonal));
  out.push_back(assignment_fixture("priority-sort-a", "exact random priority with agent 2 sorting 2F1B first",
                                   two_agent(), with(Mechanism::Mrp, sort_a()), kSeparate));
  out.push_back(assignment_fixture("priority-sort-b", "exact random priority with agent 2 sorting 1F1B first",
                                   two_agent(), with(Mechanism::Mrp, sort_b()), kDiagonal));
  out.push_back(assignment_fixture("dictatorship-twins-sort-a", "twin agents share 2F1B then 1F2B", twin_partial(),
                                   with(Mechanism::Mgd, uniform_sort({"2F1B", "1F1B", "2F2B", "1F2B"})),
                                   {{{"1F2B", "1/2"}, {"2F1B", "1/2"}}, {{"1F2B", "1/2"}, {"2F1B", "1/2"}}}));
  out.push_back(assignment_fixture("dictatorship-twins-sort-b", "twin agents share 1F1B then 2F2B", twin_partial(),
                                   with(Mechanism::Mgd, uniform_sort({"1F1B", "2F2B", "2F1B", "1F2B"})), kDiagonal));
  out.push_back({"shared-graph-eating", "eating on a shared F->B graph is sd-efficient but not decomposable",
                 shared_graph_eating});
  out.push_back({"improvable-crossed", "improvable tuples of the crossed shares and their generalized cycle",
                 improvable_crossed});
  out.push_back({"envy-free-uniform", "the uniform split is sd-envy-free yet dominated", envy_free_uniform});
  out.push_back({"priority-misreport", "reporting 2F over 1F against an empty preference", priority_misreport});
  out.push_back({"eating-empty-preference", "eating against an empty preference sorted 2F first",
                 eating_empty_preference});
  out.push_back({"dictatorship-mimicry", "agent 3 copying agent 1 under general dictatorship", dictatorship_mimicry});
  out.push_back({"ordinal-fair-not-eating", "an ordinally fair assignment that eating does not produce",
                 ordinal_fair_not_eating});
  return out;
}

bool replay(std::span<const Fixture> fixtures, std::ostream& out) {
  std::size_t width = 0;
  for (const auto& f : fixtures) width = std::max(width, f.name.size());
  for (const auto& f : fixtures) {
    std::vector<std::string> divergences;
    try {
      divergences = f.run();
    } catch (const std::exception& e) {
      divergences.push_back(std::string("threw: ") + e.what());
    }
    out << f.name << std::string(width + 2 - f.name.size(), ' ') << (divergences.empty() ? "PASS" : "FAIL") << '\n';
    if (!divergences.empty()) {
      out << "first divergence in " << f.name << ":\n";
      for (const auto& d : divergences) out << "  " << d << '\n';
      return false;
    }
  }
  return true;
}

void list_fixtures(std::span<const Fixture> fixtures, std::ostream& out) {
  std::size_t width = 0;
  for (const auto& f : fixtures) width = std::max(width, f.name.size());
  for (const auto& f : fixtures) out << f.name << std::string(width + 2 - f.name.size(), ' ') << f.summary << '\n';
}

}  // namespace mtra
