#include "mtra/axioms.hpp"
#include "mtra/error.hpp"
#include "mtra/generators.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

namespace mtra {
namespace {

using test::data_instance;
using test::named;

FractionalAssignment table(const Instance& instance, const ShareTable& shares) {
  return assignment_from_table(instance, shares);
}

std::vector<std::pair<std::string, std::string>> tuple_names(const Instance& instance,
                                                             const std::vector<ImprovableTuple>& tuples) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& t : tuples) out.emplace_back(instance.bundle_name(t.better), instance.bundle_name(t.worse));
  return out;
}

TEST(SdCompare, ReferenceComparisons) {
  const auto pair_instance = reference::two_agent();
  const auto separate = table(pair_instance, test::kSeparate);
  const auto diagonal = table(pair_instance, test::kDiagonal);
  const auto crossed = table(pair_instance, test::kCrossed);
  for (AgentIndex j = 0; j < 2; ++j) {
    EXPECT_TRUE(sd_compare(pair_instance.order(j), diagonal.row(j), crossed.row(j)).p_dominates_q);
  }
  EXPECT_FALSE(sd_compare(pair_instance.order(0), crossed.row(0), diagonal.row(0)).p_dominates_q);

  // Agent 2's rows are incomparable: {1F1B} favours the diagonal shares,
  // {2F1B} the separate ones.
  const auto v = sd_compare(pair_instance.order(1), separate.row(1), diagonal.row(1));
  EXPECT_FALSE(v.p_dominates_q);
  EXPECT_FALSE(v.q_dominates_p);
  EXPECT_EQ(v.slack[pair_instance.bundle_named("1F1B")], Rational(-1, 2));
  EXPECT_EQ(v.slack[pair_instance.bundle_named("2F1B")], Rational(1, 2));

  EXPECT_TRUE(sd_compare(pair_instance.order(1), separate.row(1), separate.row(1)).mutual());
}

TEST(SdCompare, RejectsRowsOfTheWrongLength) {
  const auto pair_instance = reference::two_agent();
  const std::vector<Rational> short_row = {1, 0};
  const std::vector<Rational> row = {1, 0, 0, 0};
  try {
    sd_compare(pair_instance.order(0), short_row, row);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UniverseMismatch);
  }
}

TEST(ImprovableTuples, CrossedSharesAndSeparateShares) {
  const auto pair_instance = reference::two_agent();
  EXPECT_EQ(tuple_names(pair_instance, improvable_tuples(pair_instance, table(pair_instance, test::kCrossed))),
            (std::vector<std::pair<std::string, std::string>>{
                {"1F1B", "1F2B"}, {"1F1B", "2F1B"}, {"1F2B", "2F1B"}, {"2F2B", "2F1B"}}));
  // Agent 1 holds 1F1B and 1F2B, so only 1F1B over 1F2B is improvable; agent 2
  // holds bundles with nothing above them.
  const auto separate = improvable_tuples(pair_instance, table(pair_instance, test::kSeparate));
  ASSERT_EQ(separate.size(), 1u);
  EXPECT_EQ(separate[0].agent, 0u);
  EXPECT_EQ(tuple_names(pair_instance, separate), (std::vector<std::pair<std::string, std::string>>{{"1F1B", "1F2B"}}));
  EXPECT_FALSE(find_generalized_cycle(pair_instance, table(pair_instance, test::kSeparate)));
}

TEST(GeneralizedCycle, PresentExactlyWhereExpected) {
  const auto pair_instance = reference::two_agent();
  EXPECT_TRUE(find_generalized_cycle(pair_instance, table(pair_instance, test::kCrossed)));
  const auto linear = reference::three_agent_linear();
  const auto top = table(linear, {{{"1F", "1/1"}}, {{"3F", "1/1"}}, {{"2F", "1/1"}}});
  EXPECT_FALSE(find_generalized_cycle(linear, top));
  // Everybody at their favourite: no improvable tuple at all.
  const auto happy = table(pair_instance, {{{"1F1B", "1"}}, {{"2F2B", "1"}}});
  EXPECT_TRUE(improvable_tuples(pair_instance, happy).empty());
  EXPECT_FALSE(find_generalized_cycle(pair_instance, happy));
}

TEST(GeneralizedCycle, EatingOutputsHaveNoneOnCpProfiles) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    const auto instance =
        random_instance(2 + i % 2, 1 + i % 2, i % 2 ? ProfileKind::CpNet : ProfileKind::IndependentCpNet, rng);
    const auto p = mps(instance, Tiebreaks::canonical(instance)).assignment;
    EXPECT_FALSE(find_generalized_cycle(instance, p)) << "profile " << i;
    EXPECT_TRUE(check_sd_efficiency(instance, p).pass);
    EXPECT_TRUE(check_envy(instance, p, EnvyStrength::Strong).pass);
    EXPECT_TRUE(check_ordinal_fairness(instance, p).pass);
    EXPECT_TRUE(check_ete(instance, p).pass);
  }
}

TEST(SdEfficiency, ReferenceVerdicts) {
  const auto three = data_instance("three_agent_empty.json");
  const ShareTable third = {{{"1F", "1/3"}, {"2F", "1/3"}, {"3F", "1/3"}},
                            {{"1F", "1/3"}, {"2F", "1/3"}, {"3F", "1/3"}},
                            {{"1F", "1/3"}, {"2F", "1/3"}, {"3F", "1/3"}}};
  const auto uniform = table(three, third);
  const auto r = check_sd_efficiency(three, uniform);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.witness);
  const auto& q = std::get<DominatingAssignment>(*r.witness).assignment;
  EXPECT_FALSE(validate_assignment(q, three));
  for (AgentIndex j = 0; j < 3; ++j) EXPECT_TRUE(sd_compare(three.order(j), q.row(j), uniform.row(j)).p_dominates_q);
  EXPECT_NE(q, uniform);

  const auto pair_instance = reference::two_agent();
  EXPECT_FALSE(check_sd_efficiency(pair_instance, table(pair_instance, test::kCrossed)).pass);

  std::mt19937_64 rng(8);
  for (int i = 0; i < 30; ++i) {
    const auto instance = random_instance(2 + i % 3, 1 + i % 2, static_cast<ProfileKind>(i % 3), rng);
    std::vector<AgentIndex> priority(instance.agent_count());
    std::iota(priority.begin(), priority.end(), AgentIndex{0});
    std::shuffle(priority.begin(), priority.end(), rng);
    const auto d = serial_dictatorship(instance, Tiebreaks::canonical(instance), priority);
    EXPECT_TRUE(check_sd_efficiency(instance, from_discrete(d, instance.bundle_count())).pass);
  }
}

TEST(Envy, ReferenceVerdicts) {
  const auto linear = reference::three_agent_linear();
  const auto dictated = table(linear, {{{"1F", "1"}}, {{"3F", "1"}}, {{"2F", "1"}}});
  const auto weak = check_envy(linear, dictated, EnvyStrength::Weak);
  EXPECT_FALSE(weak.pass);
  const auto& pair = std::get<AgentPair>(*weak.witness);
  EXPECT_EQ(pair.agent, 1u);
  EXPECT_EQ(pair.other, 0u);

  const auto twins = reference::twin_linear();
  const auto shared = table(twins, {{{"1F1B", "1/2"}, {"2F2B", "1/2"}}, {{"1F1B", "1/2"}, {"2F2B", "1/2"}}});
  EXPECT_TRUE(check_envy(twins, shared, EnvyStrength::Strong).pass);
}

TEST(EqualTreatment, Verdicts) {
  const auto twins = reference::twin_partial();
  EXPECT_TRUE(check_ete(twins, mgd(twins, Tiebreaks::canonical(twins))).pass);
  const auto unequal = table(twins, {{{"1F1B", "1"}}, {{"2F2B", "1"}}});
  const auto r = check_ete(twins, unequal);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(std::get<AgentPair>(*r.witness).other, 1u);
  const auto linear = reference::three_agent_linear();
  const auto any = table(linear, {{{"1F", "1"}}, {{"3F", "1"}}, {{"2F", "1"}}});
  EXPECT_TRUE(check_ete(linear, any).pass);
}

TEST(OrdinalFairness, Verdicts) {
  const auto twins = reference::twin_linear();
  const auto fair = table(twins, {{{"1F2B", "1/2"}, {"2F1B", "1/2"}}, {{"1F2B", "1/2"}, {"2F1B", "1/2"}}});
  EXPECT_TRUE(check_ordinal_fairness(twins, fair).pass);
  EXPECT_NE(mps(twins, Tiebreaks::canonical(twins)).assignment, fair);

  const auto linear = reference::three_agent_linear();
  const auto dictated = table(linear, {{{"1F", "1"}}, {{"3F", "1"}}, {{"2F", "1"}}});
  const auto r = check_ordinal_fairness(linear, dictated);
  EXPECT_FALSE(r.pass);
  const auto& v = std::get<FairnessViolation>(*r.witness);
  EXPECT_EQ(linear.bundle_name(v.bundle), "1F");
  EXPECT_EQ(v.agent, 0u);
  EXPECT_EQ(v.other, 1u);
}

TEST(Decomposability, Verdicts) {
  const auto shared = reference::shared_graph();
  const auto crossed = table(shared, test::kCrossed);
  const auto r = check_decomposability(shared, crossed);
  EXPECT_FALSE(r.pass);
  const auto& cert = std::get<InfeasibilityCertificate>(*r.witness);
  EXPECT_TRUE(certifies_infeasibility(cert, crossed, enumerate_discrete_assignments(shared.space())));

  const auto pair_instance = reference::two_agent();
  const auto exact = mrp(pair_instance, MrpMode::exact(), Tiebreaks::canonical(pair_instance)).assignment;
  const auto ok = check_decomposability(pair_instance, exact);
  ASSERT_TRUE(ok.pass);
  const auto& lottery = std::get<Lottery>(*ok.witness);
  EXPECT_EQ(expectation(lottery, 2, 4), exact);

  const auto discrete = table(pair_instance, {{{"1F2B", "1"}}, {{"2F1B", "1"}}});
  const auto single = check_decomposability(pair_instance, discrete);
  ASSERT_TRUE(single.pass);
  EXPECT_EQ(std::get<Lottery>(*single.witness).outcomes.size(), 1u);
}

TEST(Decomposability, RefusesInstancesBeyondTheGuard) {
  const Instance big(standard_types(4, 3),
                     std::vector<AgentPreference>(4, AgentPreference::from_order(PartialOrder(64))));
  try {
    check_decomposability(big, mps(big, Tiebreaks::canonical(big)).assignment);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InstanceTooLargeToDecide);
  }
}

TEST(ExPostEfficiency, Verdicts) {
  const auto pair_instance = reference::two_agent();
  EXPECT_TRUE(check_ex_post_efficiency(pair_instance, mrp(pair_instance, MrpMode::exact(), Tiebreaks::canonical(pair_instance)).assignment).pass);
  const auto shared = reference::shared_graph();
  EXPECT_FALSE(check_ex_post_efficiency(shared, table(shared, test::kCrossed)).pass);

  // Half the weight sits on an assignment both agents would trade away from.
  const auto chain1 = test::chain(pair_instance, {"1F1B", "1F2B", "2F1B", "2F2B"});
  const auto chain2 = test::chain(pair_instance, {"2F2B", "2F1B", "1F1B", "1F2B"});
  const Instance two(pair_instance.types(), {AgentPreference::from_order(chain1), AgentPreference::from_order(chain2)});
  const auto good = DiscreteAssignment{named(two, {"1F1B", "2F2B"})};
  const auto bad = DiscreteAssignment{named(two, {"1F2B", "2F1B"})};
  EXPECT_TRUE(check_sd_efficiency(two, from_discrete(good, 4)).pass);
  EXPECT_FALSE(check_sd_efficiency(two, from_discrete(bad, 4)).pass);
  const Lottery mix{{{Rational(1, 2), good}, {Rational(1, 2), bad}}};
  EXPECT_FALSE(check_ex_post_efficiency(two, expectation(mix, 2, 4)).pass);
}

TEST(Strategyproofness, ReferenceVerdicts) {
  const auto empty = reference::two_agent_empty();
  const auto r = check_strategyproofness(Mechanism::Mrp, empty, MisreportSpace::linear_orders(), SpStrength::Sd);
  EXPECT_FALSE(r.pass);
  const auto& m = std::get<Misreport>(*r.witness);
  EXPECT_EQ(m.agent, 0u);
  EXPECT_TRUE(m.report.order.prefers(empty.bundle_named("2F"), empty.bundle_named("1F")));

  const auto linear = reference::three_agent_linear();
  const auto mimic = check_strategyproofness(
      Mechanism::Mgd, linear, MisreportSpace::explicit_list({{2, linear.preference(0)}}), SpStrength::Weak);
  EXPECT_FALSE(mimic.pass);
  const auto& w = std::get<Misreport>(*mimic.witness);
  EXPECT_EQ(w.misreported.at(2, linear.bundle_named("1F")), Rational(1, 2));
  EXPECT_EQ(w.misreported.at(2, linear.bundle_named("2F")), Rational(1, 2));

  std::mt19937_64 rng(12);
  for (int i = 0; i < 10; ++i) {
    const auto instance = random_instance(2 + i % 2, 1 + i % 2, ProfileKind::CpNet, rng);
    EXPECT_TRUE(check_strategyproofness(Mechanism::Mrp, instance, MisreportSpace::cp_nets(), SpStrength::Sd).pass);
  }
}

TEST(Strategyproofness, LinearOrderSpaceIsGuarded) {
  const Instance nine(standard_types(3, 2), std::vector<AgentPreference>(3, AgentPreference::from_order(PartialOrder(9))));
  try {
    check_strategyproofness(Mechanism::Mps, nine, MisreportSpace::linear_orders(), SpStrength::Weak);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MisreportSpaceTooLarge);
  }
}

TEST(UpperInvariance, ReferenceVerdicts) {
  const auto empty = reference::two_agent_empty();
  const auto f1 = empty.bundle_named("1F");
  const auto f2 = empty.bundle_named("2F");
  const std::vector<BundlePair> lie = {{f2, f1}};
  const auto report = AgentPreference::from_order(PartialOrder::from_pairs(2, lie));
  const auto r = check_upper_invariance(Mechanism::Mrp, empty, TransformSource::explicit_list({{0, report, f2}}));
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(std::holds_alternative<InvarianceViolation>(*r.witness));

  const auto identity =
      check_upper_invariance(Mechanism::Mrp, empty, TransformSource::explicit_list({{0, empty.preference(0), f1}}));
  EXPECT_TRUE(identity.pass);

  std::mt19937_64 rng(14);
  for (int i = 0; i < 10; ++i) {
    const auto instance = random_instance(2 + i % 2, 1 + i % 2, ProfileKind::CpNet, rng);
    EXPECT_TRUE(check_upper_invariance(Mechanism::Mps, instance, TransformSource::cp_nets()).pass);
    EXPECT_TRUE(check_upper_invariance(Mechanism::Mps, instance, TransformSource::generated()).pass);
  }
}

TEST(Properties, NamesRoundTrip) {
  for (auto p : all_properties()) EXPECT_EQ(parse_property(property_name(p)), p);
  EXPECT_FALSE(parse_property("efficiency"));
  EXPECT_TRUE(is_mechanism_property(Property::UpperInvariance));
  EXPECT_FALSE(is_mechanism_property(Property::Decomposability));
}

}  // namespace
}  // namespace mtra
