#include "mtra/assignment.hpp"
#include "mtra/bundle.hpp"
#include "mtra/error.hpp"
#include "mtra/generators.hpp"
#include "mtra/instance.hpp"
#include "mtra/rational.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

namespace mtra {
namespace {

using test::data_instance;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::Parse;
}

TEST(Rational, ParsesAndPrintsCanonicalForms) {
  EXPECT_EQ(parse_rational("2/4"), Rational(1, 2));
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-1/3"), Rational(-1, 3));
  EXPECT_EQ(to_string(Rational(2, 4)), "1/2");
  EXPECT_EQ(to_string(Rational(0)), "0/1");
  EXPECT_EQ(to_string(Rational(1)), "1/1");
  EXPECT_EQ(kind_of([] { parse_rational("0.5"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_rational("1/0"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse_rational(""); }), ErrorKind::Parse);
}

TEST(BundleSpace, EnumeratesInLexicographicProductOrder) {
  const auto two = reference::two_agent();
  std::vector<std::string> names;
  for (BundleIndex x = 0; x < two.bundle_count(); ++x) names.push_back(two.bundle_name(x));
  EXPECT_EQ(names, (std::vector<std::string>{"1F1B", "1F2B", "2F1B", "2F2B"}));

  const auto one = reference::three_agent_linear();
  EXPECT_EQ(one.bundle_name(0), "1F");
  EXPECT_EQ(one.bundle_name(2), "3F");

  const Instance nine(standard_types(3, 2), std::vector<AgentPreference>(3, AgentPreference::from_order(PartialOrder(9))));
  EXPECT_EQ(nine.bundle_count(), 9u);
  EXPECT_EQ(nine.bundle_name(0), "1F1B");
  EXPECT_EQ(nine.bundle_name(8), "3F3B");
}

TEST(BundleSpace, EncodeIsInjectiveAndInvertsDecode) {
  const BundleSpace space(3, 3);
  std::set<BundleIndex> seen;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      for (std::size_t c = 0; c < 3; ++c) {
        const std::vector<std::size_t> items = {a, b, c};
        const auto x = space.encode(items);
        EXPECT_TRUE(seen.insert(x).second);
        EXPECT_EQ(space.decode(x).items, items);
        for (std::size_t t = 0; t < 3; ++t) EXPECT_TRUE(space.contains(x, space.global_item(t, items[t])));
      }
    }
  }
  EXPECT_EQ(seen.size(), space.size());
}

TEST(Instance, LoadsReferenceFileAndSingleton) {
  const auto pair_instance = data_instance("two_agent.json");
  EXPECT_EQ(pair_instance.agent_count(), 2u);
  EXPECT_EQ(pair_instance.bundle_count(), 4u);
  EXPECT_TRUE(pair_instance.preference(0).cpnet.has_value());
  EXPECT_FALSE(pair_instance.preference(1).cpnet.has_value());

  const auto single = data_instance("single.json");
  EXPECT_EQ(single.agent_count(), 1u);
  EXPECT_EQ(single.bundle_count(), 1u);
}

TEST(Instance, RejectsMalformedSpecs) {
  InstanceSpec wrong_size{2, {{"F", {"1F", "2F", "3F"}}}, {PartialPreferenceSpec{}, PartialPreferenceSpec{}}};
  EXPECT_EQ(kind_of([&] { build_instance(wrong_size); }), ErrorKind::TypeSizeMismatch);

  InstanceSpec duplicate{2, {{"F", {"1F", "1F"}}}, {PartialPreferenceSpec{}, PartialPreferenceSpec{}}};
  EXPECT_EQ(kind_of([&] { build_instance(duplicate); }), ErrorKind::DuplicateItemName);

  InstanceSpec missing{2, {{"F", {"1F", "2F"}}}, {PartialPreferenceSpec{}}};
  EXPECT_EQ(kind_of([&] { build_instance(missing); }), ErrorKind::MissingPreference);

  InstanceSpec unknown{1, {{"F", {"1F"}}}, {PartialPreferenceSpec{{{"1F", "9F"}}}}};
  EXPECT_EQ(kind_of([&] { build_instance(unknown); }), ErrorKind::UnknownName);

  InstanceSpec cyclic{2, {{"F", {"1F", "2F"}}}, {PartialPreferenceSpec{{{"1F", "2F"}, {"2F", "1F"}}}, PartialPreferenceSpec{}}};
  EXPECT_EQ(kind_of([&] { build_instance(cyclic); }), ErrorKind::CyclicPreference);

  CpNetPreferenceSpec loop;
  loop.dependency = {{"F", "B"}, {"B", "F"}};
  InstanceSpec cyclic_net{2, {{"F", {"1F", "2F"}}, {"B", {"1B", "2B"}}}, {loop, PartialPreferenceSpec{}}};
  EXPECT_EQ(kind_of([&] { build_instance(cyclic_net); }), ErrorKind::CyclicDependency);

  CpNetPreferenceSpec partial_table;
  partial_table.cpt["F"][""] = {"1F", "2F"};
  InstanceSpec incomplete{2, {{"F", {"1F", "2F"}}, {"B", {"1B", "2B"}}}, {partial_table, PartialPreferenceSpec{}}};
  EXPECT_EQ(kind_of([&] { build_instance(incomplete); }), ErrorKind::IncompleteCPT);
}

TEST(Assignment, ValidatesRowsAndMarginals) {
  const auto instance = reference::two_agent();
  EXPECT_FALSE(validate_assignment(assignment_from_table(instance, test::kDiagonal), instance));
  EXPECT_FALSE(validate_assignment(assignment_from_table(instance, test::kCrossed), instance));

  const auto zero = validate_assignment(FractionalAssignment(2, 4), instance);
  ASSERT_TRUE(zero);
  EXPECT_EQ(zero->kind, AssignmentViolation::Kind::RowSum);
  EXPECT_EQ(zero->index, 0u);

  auto negative = assignment_from_table(instance, test::kDiagonal);
  negative.at(0, 0) = Rational(-1, 2);
  negative.at(0, 1) = Rational(1);
  const auto range = validate_assignment(negative, instance);
  ASSERT_TRUE(range);
  EXPECT_EQ(range->kind, AssignmentViolation::Kind::EntryOutOfRange);

  // Rows sum to one but item 1F is used twice.
  const auto doubled = assignment_from_table(instance, {{{"1F1B", "1"}}, {{"1F2B", "1"}}});
  const auto marginal = validate_assignment(doubled, instance);
  ASSERT_TRUE(marginal);
  EXPECT_EQ(marginal->kind, AssignmentViolation::Kind::ItemMarginal);
}

TEST(Assignment, DiscreteToMatrix) {
  const auto instance = reference::two_agent();
  const DiscreteAssignment d{test::named(instance, {"1F1B", "2F2B"})};
  EXPECT_TRUE(is_valid_discrete(d, instance.space()));
  EXPECT_EQ(from_discrete(d, 4), assignment_from_table(instance, {{{"1F1B", "1"}}, {{"2F2B", "1"}}}));
  EXPECT_FALSE(is_valid_discrete(DiscreteAssignment{test::named(instance, {"1F1B", "2F1B"})}, instance.space()));

  const auto single = data_instance("single.json");
  EXPECT_EQ(from_discrete(DiscreteAssignment{{0}}, 1).at(0, 0), 1);

  const auto linear = reference::three_agent_linear();
  const auto m = from_discrete(DiscreteAssignment{test::named(linear, {"1F", "3F", "2F"})}, 3);
  EXPECT_EQ(m, assignment_from_table(linear, {{{"1F", "1"}}, {{"3F", "1"}}, {{"2F", "1"}}}));
}

TEST(Assignment, EnumeratesEveryDiscreteAssignment) {
  const BundleSpace space(3, 2);
  const auto all = enumerate_discrete_assignments(space);
  EXPECT_EQ(all.size(), discrete_assignment_count(space));
  EXPECT_EQ(all.size(), 36u);
  std::set<DiscreteAssignment> unique(all.begin(), all.end());
  EXPECT_EQ(unique.size(), all.size());
  for (const auto& d : all) EXPECT_TRUE(is_valid_discrete(d, space));
}

TEST(Assignment, LotteryExpectation) {
  const auto instance = reference::two_agent();
  Lottery lottery;
  lottery.outcomes.push_back({Rational(1, 2), DiscreteAssignment{test::named(instance, {"1F1B", "2F2B"})}});
  lottery.outcomes.push_back({Rational(1, 2), DiscreteAssignment{test::named(instance, {"2F2B", "1F1B"})}});
  EXPECT_TRUE(is_valid_lottery(lottery, instance.space()));
  EXPECT_EQ(expectation(lottery, 2, 4), assignment_from_table(instance, test::kDiagonal));
  lottery.outcomes[0].probability = Rational(1, 3);
  EXPECT_FALSE(is_valid_lottery(lottery, instance.space()));
}

}  // namespace
}  // namespace mtra
