#include "mtra/error.hpp"
#include "mtra/fixtures.hpp"
#include "mtra/generators.hpp"
#include "mtra/io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace mtra {
namespace {

bool same_profile(const Instance& a, const Instance& b) {
  if (a.agent_count() != b.agent_count() || a.types() != b.types()) return false;
  for (AgentIndex j = 0; j < a.agent_count(); ++j) {
    if (a.order(j) != b.order(j)) return false;
    if (a.preference(j).cpnet.has_value() != b.preference(j).cpnet.has_value()) return false;
    if (a.preference(j).cpnet && !(*a.preference(j).cpnet == *b.preference(j).cpnet)) return false;
  }
  return true;
}

ErrorKind parse_error(const std::string& text) {
  try {
    build_instance(parse_instance_document(text).spec);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error for " << text;
  return ErrorKind::Parse;
}

TEST(InstanceFile, RoundTripsRandomInstances) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 60; ++i) {
    const auto instance = random_instance(1 + i % 3, 1 + i % 3, static_cast<ProfileKind>(i % 3), rng);
    TiebreakSpec tiebreak;
    if (i % 2) tiebreak.per_agent[0] = {instance.bundle_name(instance.bundle_count() - 1)};
    const InstanceDocument doc{describe_instance(instance), tiebreak};
    const auto text = serialize_instance_document(doc);
    const auto parsed = parse_instance_document(text);
    EXPECT_EQ(serialize_instance_document(parsed), text);
    EXPECT_EQ(parsed.tiebreak, tiebreak);
    EXPECT_TRUE(same_profile(build_instance(parsed.spec), instance)) << text;
  }
}

TEST(InstanceFile, ReferenceFileMatchesTheBuiltInInstance) {
  TiebreakSpec tiebreak;
  const auto loaded = test::data_instance("two_agent_sort_a.json", &tiebreak);
  EXPECT_TRUE(same_profile(loaded, reference::two_agent()));
  EXPECT_EQ(tiebreak, reference::sort_a());
  EXPECT_EQ(resolve_tiebreaks(loaded, tiebreak).per_agent[1],
            test::sequence(loaded, {"2F1B", "1F1B", "2F2B", "1F2B"}));
}

TEST(InstanceFile, ReportsMalformedDocuments) {
  EXPECT_EQ(parse_error("{"), ErrorKind::Parse);
  EXPECT_EQ(parse_error(R"({"agents": 1})"), ErrorKind::Parse);
  EXPECT_EQ(parse_error(R"({"agents": "two", "types": [], "preferences": []})"), ErrorKind::Parse);
  EXPECT_EQ(parse_error(R"({"agents": 1, "types": [{"name": "F", "items": ["1F"]}],
                            "preferences": [{"kind": "ranking"}]})"),
            ErrorKind::Parse);
  EXPECT_EQ(parse_error(R"({"agents": 1, "types": [{"name": "F", "items": ["1F"]}],
                            "preferences": [{"kind": "partial", "edges": [["1F", "2F"]]}]})"),
            ErrorKind::UnknownName);
}

TEST(AssignmentFile, RoundTripsAndDefaultsMissingBundlesToZero) {
  const auto pair_instance = reference::two_agent();
  AssignmentDocument doc{{"mps", "exact", std::nullopt, std::nullopt, reference::sort_a()},
                         assignment_from_table(pair_instance, test::kSeparate)};
  const auto text = serialize_assignment_document(doc, pair_instance);
  const auto back = parse_assignment_document(text, pair_instance);
  EXPECT_EQ(back.metadata, doc.metadata);
  EXPECT_EQ(back.assignment, doc.assignment);
  EXPECT_NE(text.find("\"1/2\""), std::string::npos);
  EXPECT_NE(text.find("\"0/1\""), std::string::npos);

  const auto sparse = parse_assignment_document(R"({"shares": {"1": {"1F1B": "1/2", "2F2B": "1/2"},
                                                               "2": {"1F1B": "1/2", "2F2B": "1/2"}}})",
                                                pair_instance);
  EXPECT_EQ(sparse.assignment, assignment_from_table(pair_instance, test::kDiagonal));
  EXPECT_TRUE(sparse.metadata.mechanism.empty());
}

TEST(AssignmentFile, RejectsUnknownBundlesAndAgents) {
  const auto pair_instance = reference::two_agent();
  EXPECT_THROW(parse_assignment_document(R"({"shares": {"1": {"9F9B": "1"}}})", pair_instance), Error);
  EXPECT_THROW(parse_assignment_document(R"({"shares": {"3": {"1F1B": "1"}}})", pair_instance), Error);
  EXPECT_THROW(parse_assignment_document(R"({"shares": {"1": {"1F1B": 0.5}}})", pair_instance), Error);
}

TEST(LotteryFile, RoundTrips) {
  const auto twins = reference::twin_partial();
  const auto d = mgd_decompose(twins, Tiebreaks::canonical(twins));
  const auto text = serialize_lottery(d.lottery, twins, d.priorities);
  const auto back = parse_lottery(text, twins);
  ASSERT_EQ(back.outcomes.size(), d.lottery.outcomes.size());
  for (std::size_t i = 0; i < back.outcomes.size(); ++i) {
    EXPECT_EQ(back.outcomes[i].probability, d.lottery.outcomes[i].probability);
    EXPECT_EQ(back.outcomes[i].assignment, d.lottery.outcomes[i].assignment);
  }
}

TEST(TiebreakFile, RoundTrips) {
  TiebreakSpec spec{std::vector<std::string>{"2F2B", "1F1B", "1F2B", "2F1B"},
                    {{1, {"1F2B", "1F1B", "2F1B", "2F2B"}}}};
  EXPECT_EQ(parse_tiebreak_document(serialize_tiebreak_document(spec)), spec);
  const auto pair_instance = reference::two_agent();
  const auto resolved = resolve_tiebreaks(pair_instance, spec);
  EXPECT_EQ(resolved.per_agent[0], test::sequence(pair_instance, {"2F2B", "1F1B", "1F2B", "2F1B"}));
  EXPECT_EQ(resolved.per_agent[1], test::sequence(pair_instance, {"1F2B", "1F1B", "2F1B", "2F2B"}));

  const TiebreakSpec partial{std::vector<std::string>{"2F2B", "1F1B"}, {}};
  try {
    resolve_tiebreaks(pair_instance, partial);
    ADD_FAILURE() << "a partial tiebreak was accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UniverseMismatch);
  }
}

TEST(Fixtures, AllReproduce) {
  std::ostringstream out;
  EXPECT_TRUE(replay(reference_fixtures(), out)) << out.str();
  EXPECT_EQ(out.str().find("FAIL"), std::string::npos);
}

TEST(Fixtures, CorruptedFixtureIsNamed) {
  auto fixtures = reference_fixtures();
  const auto pair_instance = reference::two_agent();
  auto wrong = test::kSeparate;
  wrong[0][0].second = "1/3";
  wrong[0][1].second = "2/3";
  fixtures.insert(fixtures.begin() + 1,
                  assignment_fixture("corrupted", "separate shares with a wrong entry", pair_instance,
                                     [](const Instance& i) {
                                       auto t = Tiebreaks::canonical(i);
                                       t.per_agent[1] = resolve_tiebreaks(i, reference::sort_a()).per_agent[1];
                                       return mps(i, t).assignment;
                                     },
                                     wrong));
  std::ostringstream out;
  EXPECT_FALSE(replay(fixtures, out));
  EXPECT_NE(out.str().find("first divergence in corrupted"), std::string::npos) << out.str();
  // Replay stops at the first divergence.
  EXPECT_EQ(out.str().find(fixtures.back().name), std::string::npos);
}

TEST(Fixtures, ListingDoesNotRun) {
  bool ran = false;
  std::vector<Fixture> fixtures = {{"probe", "never executed", [&] {
                                      ran = true;
                                      return std::vector<std::string>{};
                                    }}};
  std::ostringstream out;
  list_fixtures(fixtures, out);
  EXPECT_FALSE(ran);
  EXPECT_NE(out.str().find("probe"), std::string::npos);
}

}  // namespace
}  // namespace mtra
