#include "mtra/axioms.hpp"

#include "mtra/error.hpp"
#include "mtra/lp.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace mtra {

std::vector<Rational> upper_contour_sums(const PartialOrder& order, std::span<const Rational> row) {
  const std::size_t n = order.universe();
  std::vector<Rational> sums(n, Rational(0));
  for (BundleIndex x = 0; x < n; ++x) {
    for (BundleIndex y = 0; y < n; ++y) {
      if (y == x || order.prefers(y, x)) sums[x] += row[y];
    }
  }
  return sums;
}

SdVerdict sd_compare(const PartialOrder& order, std::span<const Rational> p, std::span<const Rational> q) {
  if (p.size() != order.universe() || q.size() != order.universe()) {
    throw Error(ErrorKind::UniverseMismatch, "allocation rows do not match the preference universe");
  }
  const auto up = upper_contour_sums(order, p);
  const auto uq = upper_contour_sums(order, q);
  SdVerdict verdict{true, true, std::vector<Rational>(p.size())};
  for (BundleIndex x = 0; x < p.size(); ++x) {
    verdict.slack[x] = up[x] - uq[x];
    if (verdict.slack[x] < 0) verdict.p_dominates_q = false;
    if (verdict.slack[x] > 0) verdict.q_dominates_p = false;
  }
  return verdict;
}

std::vector<ImprovableTuple> improvable_tuples(const Instance& instance, const FractionalAssignment& assignment) {
  std::vector<ImprovableTuple> out;
  const std::size_t bundles = instance.bundle_count();
  for (BundleIndex better = 0; better < bundles; ++better) {
    for (BundleIndex worse = 0; worse < bundles; ++worse) {
      for (AgentIndex j = 0; j < instance.agent_count(); ++j) {
        if (assignment.at(j, worse) > 0 && instance.order(j).prefers(better, worse)) {
          out.push_back({better, worse, j});
          break;
        }
      }
    }
  }
  return out;
}

std::optional<std::vector<ImprovableTuple>> find_generalized_cycle(const Instance& instance,
                                                                   const FractionalAssignment& assignment) {
  const auto& space = instance.space();
  auto tuples = improvable_tuples(instance, assignment);
  while (!tuples.empty()) {
    std::vector<bool> on_right(space.item_count(), false);
    for (const auto& t : tuples) {
      for (std::size_t k = 0; k < space.type_count(); ++k) on_right[space.global_item_of(t.worse, k)] = true;
    }
    const auto before = tuples.size();
    std::erase_if(tuples, [&](const ImprovableTuple& t) {
      for (std::size_t k = 0; k < space.type_count(); ++k) {
        if (!on_right[space.global_item_of(t.better, k)]) return true;
      }
      return false;
    });
    if (tuples.size() == before) return tuples;
  }
  return std::nullopt;
}

namespace {

struct PropertyInfo {
  Property property;
  std::string_view name;
};

constexpr PropertyInfo kProperties[] = {
    {Property::SdEfficiency, "sd-efficiency"},
    {Property::ExPostEfficiency, "ex-post-efficiency"},
    {Property::OrdinalFairness, "ordinal-fairness"},
    {Property::SdEnvyFreeness, "sd-envy-freeness"},
    {Property::WeakSdEnvyFreeness, "weak-sd-envy-freeness"},
    {Property::EqualTreatment, "equal-treatment-of-equals"},
    {Property::UpperInvariance, "upper-invariance"},
    {Property::SdStrategyproofness, "sd-strategyproofness"},
    {Property::WeakSdStrategyproofness, "weak-sd-strategyproofness"},
    {Property::Decomposability, "decomposability"},
};

bool rows_equal(const FractionalAssignment& a, AgentIndex j, const FractionalAssignment& b, AgentIndex k) {
  return std::ranges::equal(a.row(j), b.row(k));
}

PropertyReport pass(Property property, std::size_t cases, std::string detail = {}) {
  return PropertyReport{property, true, std::nullopt, cases, std::move(detail)};
}

PropertyReport fail(Property property, Witness witness, std::size_t cases, std::string detail) {
  return PropertyReport{property, false, std::move(witness), cases, std::move(detail)};
}

std::size_t cell(const Instance& instance, AgentIndex j, BundleIndex x) { return j * instance.bundle_count() + x; }

// Validity constraints over agent-major cell variables: unit rows and unit
// item marginals.
void add_assignment_constraints(lp::LinearProgram& program, const Instance& instance) {
  const auto& space = instance.space();
  const std::size_t n = instance.agent_count();
  for (AgentIndex j = 0; j < n; ++j) {
    std::vector<lp::Term> terms;
    for (BundleIndex x = 0; x < space.size(); ++x) terms.emplace_back(cell(instance, j, x), 1);
    program.add_constraint(std::move(terms), lp::Relation::Equal, 1);
  }
  for (std::size_t t = 0; t < space.type_count(); ++t) {
    for (std::size_t item = 0; item < space.items_per_type(); ++item) {
      std::vector<lp::Term> terms;
      for (AgentIndex j = 0; j < n; ++j) {
        for (BundleIndex x = 0; x < space.size(); ++x) {
          if (space.item_of(x, t) == item) terms.emplace_back(cell(instance, j, x), 1);
        }
      }
      program.add_constraint(std::move(terms), lp::Relation::Equal, 1);
    }
  }
}

void require_shape(const Instance& instance, const FractionalAssignment& assignment) {
  if (assignment.agent_count() != instance.agent_count() || assignment.bundle_count() != instance.bundle_count()) {
    throw Error(ErrorKind::DimensionMismatch, "assignment shape does not match the instance");
  }
}

bool in_support(const FractionalAssignment& assignment, const DiscreteAssignment& a) {
  for (AgentIndex j = 0; j < a.bundle_of.size(); ++j) {
    if (assignment.at(j, a.bundle_of[j]) == 0) return false;
  }
  return true;
}

std::vector<DiscreteAssignment> support_candidates(const Instance& instance, const FractionalAssignment& assignment) {
  const auto count = discrete_assignment_count(instance.space());
  if (count > kMaxDecidableAssignments) {
    throw Error(ErrorKind::InstanceTooLargeToDecide, std::to_string(count) + " discrete assignments exceed the limit of " +
                                                         std::to_string(kMaxDecidableAssignments));
  }
  auto all = enumerate_discrete_assignments(instance.space());
  std::erase_if(all, [&](const DiscreteAssignment& a) { return !in_support(assignment, a); });
  return all;
}

// Lottery over `candidates` whose expectation is `assignment`, or a Farkas
// certificate that none exists.
std::variant<Lottery, InfeasibilityCertificate> decompose(const Instance& instance,
                                                          const FractionalAssignment& assignment,
                                                          const std::vector<DiscreteAssignment>& candidates) {
  const std::size_t n = instance.agent_count();
  const std::size_t bundles = instance.bundle_count();
  std::vector<std::size_t> support;
  for (AgentIndex j = 0; j < n; ++j) {
    for (BundleIndex x = 0; x < bundles; ++x) {
      if (assignment.at(j, x) != 0) support.push_back(cell(instance, j, x));
    }
  }

  lp::LinearProgram primal(candidates.size());
  std::vector<std::vector<lp::Term>> rows(n * bundles);
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    for (AgentIndex j = 0; j < n; ++j) rows[cell(instance, j, candidates[a].bundle_of[j])].emplace_back(a, 1);
  }
  for (auto c : support) primal.add_constraint(std::move(rows[c]), lp::Relation::Equal, assignment.at(c / bundles, c % bundles));
  std::vector<lp::Term> total;
  for (std::size_t a = 0; a < candidates.size(); ++a) total.emplace_back(a, 1);
  primal.add_constraint(std::move(total), lp::Relation::Equal, 1);

  const auto outcome = lp::feasibility(primal);
  if (outcome.status == lp::Status::Optimal) {
    Lottery lottery;
    for (std::size_t a = 0; a < candidates.size(); ++a) {
      if (outcome.values[a] > 0) lottery.outcomes.push_back({outcome.values[a], candidates[a]});
    }
    if (expectation(lottery, n, bundles) != assignment) throw std::logic_error("decomposition does not reproduce P");
    return lottery;
  }

  // Farkas: weights y on support cells with sum_j y[j][A(j)] >= 0 for every
  // candidate A and y.P < 0. Free weights are split into positive parts.
  const std::size_t k = support.size();
  std::vector<std::size_t> position(n * bundles, k);
  for (std::size_t s = 0; s < k; ++s) position[support[s]] = s;
  lp::LinearProgram dual(2 * k);
  for (const auto& a : candidates) {
    std::vector<lp::Term> terms;
    for (AgentIndex j = 0; j < n; ++j) {
      const auto s = position[cell(instance, j, a.bundle_of[j])];
      terms.emplace_back(s, 1);
      terms.emplace_back(k + s, -1);
    }
    dual.add_constraint(std::move(terms), lp::Relation::GreaterEqual, 0);
  }
  std::vector<lp::Term> value;
  std::vector<lp::Term> negated;
  for (std::size_t s = 0; s < k; ++s) {
    const Rational& p = assignment.at(support[s] / bundles, support[s] % bundles);
    value.emplace_back(s, p);
    value.emplace_back(k + s, -p);
    negated.emplace_back(s, -p);
    negated.emplace_back(k + s, p);
  }
  dual.add_constraint(value, lp::Relation::GreaterEqual, -1);
  dual.maximize(negated);
  const auto certificate_lp = lp::solve(dual);
  if (certificate_lp.status != lp::Status::Optimal || certificate_lp.objective <= 0) {
    throw std::logic_error("decomposition LP infeasible without a Farkas certificate");
  }

  InfeasibilityCertificate certificate{n, bundles, std::vector<Rational>(n * bundles, Rational(0))};
  Rational magnitude = 1;
  for (std::size_t s = 0; s < k; ++s) {
    certificate.weights[support[s]] = certificate_lp.values[s] - certificate_lp.values[k + s];
    magnitude += abs(certificate.weights[support[s]]);
  }
  // A large weight on every zero cell makes the certificate hold for
  // assignments outside the support too.
  for (std::size_t c = 0; c < n * bundles; ++c) {
    if (position[c] == k) certificate.weights[c] = magnitude;
  }
  return certificate;
}

}  // namespace

std::string_view property_name(Property property) {
  for (const auto& info : kProperties) {
    if (info.property == property) return info.name;
  }
  return "";
}

std::optional<Property> parse_property(std::string_view name) {
  for (const auto& info : kProperties) {
    if (info.name == name) return info.property;
  }
  return std::nullopt;
}

const std::vector<Property>& all_properties() {
  static const std::vector<Property> properties = [] {
    std::vector<Property> out;
    for (const auto& info : kProperties) out.push_back(info.property);
    return out;
  }();
  return properties;
}

bool is_mechanism_property(Property property) {
  return property == Property::UpperInvariance || property == Property::SdStrategyproofness ||
         property == Property::WeakSdStrategyproofness;
}

PropertyReport check_sd_efficiency(const Instance& instance, const FractionalAssignment& assignment) {
  require_shape(instance, assignment);
  const std::size_t n = instance.agent_count();
  const std::size_t bundles = instance.bundle_count();
  lp::LinearProgram program(n * bundles);
  add_assignment_constraints(program, instance);
  std::vector<lp::Term> objective;
  Rational baseline = 0;
  for (AgentIndex j = 0; j < n; ++j) {
    const auto& order = instance.order(j);
    const auto target = upper_contour_sums(order, assignment.row(j));
    for (BundleIndex x = 0; x < bundles; ++x) {
      std::vector<lp::Term> terms;
      for (auto y : upper_contour_set(order, x)) terms.emplace_back(cell(instance, j, y), 1);
      program.add_constraint(std::move(terms), lp::Relation::GreaterEqual, target[x]);
      baseline += target[x];
    }
    // Q[j][y] counts once for every x in whose upper contour set y lies.
    for (BundleIndex y = 0; y < bundles; ++y) {
      Rational weight = 1;
      for (BundleIndex x = 0; x < bundles; ++x) {
        if (order.prefers(y, x)) weight += 1;
      }
      objective.emplace_back(cell(instance, j, y), weight);
    }
  }
  program.maximize(std::move(objective));
  const auto outcome = lp::solve(program);
  if (outcome.status != lp::Status::Optimal) throw std::logic_error("dominance LP must be feasible and bounded");
  if (outcome.objective == baseline) return pass(Property::SdEfficiency, 1);

  FractionalAssignment witness(n, bundles);
  for (AgentIndex j = 0; j < n; ++j) {
    for (BundleIndex x = 0; x < bundles; ++x) witness.at(j, x) = outcome.values[cell(instance, j, x)];
  }
  return fail(Property::SdEfficiency, DominatingAssignment{std::move(witness)}, 1,
              "total upper-contour slack " + to_string(outcome.objective - baseline));
}

PropertyReport check_envy(const Instance& instance, const FractionalAssignment& assignment, EnvyStrength strength) {
  require_shape(instance, assignment);
  const std::size_t n = instance.agent_count();
  const Property property = strength == EnvyStrength::Strong ? Property::SdEnvyFreeness : Property::WeakSdEnvyFreeness;
  std::size_t cases = 0;
  for (AgentIndex j = 0; j < n; ++j) {
    for (AgentIndex other = 0; other < n; ++other) {
      if (other == j) continue;
      ++cases;
      if (strength == EnvyStrength::Strong) {
        if (!sd_compare(instance.order(j), assignment.row(j), assignment.row(other)).p_dominates_q) {
          return fail(property, AgentPair{j, other}, cases, "own share does not sd-dominate the other's");
        }
      } else if (sd_compare(instance.order(j), assignment.row(other), assignment.row(j)).p_dominates_q &&
                 !rows_equal(assignment, j, assignment, other)) {
        return fail(property, AgentPair{j, other}, cases, "the other's share sd-dominates a different own share");
      }
    }
  }
  return pass(property, cases);
}

PropertyReport check_ete(const Instance& instance, const FractionalAssignment& assignment) {
  require_shape(instance, assignment);
  std::size_t cases = 0;
  for (AgentIndex j = 0; j < instance.agent_count(); ++j) {
    for (AgentIndex other = j + 1; other < instance.agent_count(); ++other) {
      if (instance.order(j) != instance.order(other)) continue;
      ++cases;
      if (!rows_equal(assignment, j, assignment, other)) {
        return fail(Property::EqualTreatment, AgentPair{j, other}, cases, "equal preferences, different shares");
      }
    }
  }
  return pass(Property::EqualTreatment, cases);
}

PropertyReport check_ordinal_fairness(const Instance& instance, const FractionalAssignment& assignment) {
  require_shape(instance, assignment);
  const std::size_t n = instance.agent_count();
  std::vector<std::vector<Rational>> sums;
  for (AgentIndex j = 0; j < n; ++j) sums.push_back(upper_contour_sums(instance.order(j), assignment.row(j)));
  std::size_t cases = 0;
  for (BundleIndex x = 0; x < instance.bundle_count(); ++x) {
    for (AgentIndex j = 0; j < n; ++j) {
      if (assignment.at(j, x) == 0) continue;
      for (AgentIndex other = 0; other < n; ++other) {
        if (other == j) continue;
        ++cases;
        if (sums[j][x] > sums[other][x]) {
          return fail(Property::OrdinalFairness, FairnessViolation{x, j, other}, cases,
                      "upper-contour share " + to_string(sums[j][x]) + " exceeds " + to_string(sums[other][x]));
        }
      }
    }
  }
  return pass(Property::OrdinalFairness, cases);
}

PropertyReport check_decomposability(const Instance& instance, const FractionalAssignment& assignment) {
  require_shape(instance, assignment);
  const auto candidates = support_candidates(instance, assignment);
  auto result = decompose(instance, assignment, candidates);
  if (auto* lottery = std::get_if<Lottery>(&result)) {
    auto outcomes = lottery->outcomes.size();
    return PropertyReport{Property::Decomposability, true, Witness{std::move(*lottery)}, candidates.size(),
                          std::to_string(outcomes) + " discrete assignments in the lottery"};
  }
  return fail(Property::Decomposability, std::get<InfeasibilityCertificate>(std::move(result)), candidates.size(),
              "no lottery over discrete assignments reproduces the shares");
}

PropertyReport check_ex_post_efficiency(const Instance& instance, const FractionalAssignment& assignment) {
  require_shape(instance, assignment);
  auto candidates = support_candidates(instance, assignment);
  const auto bundles = instance.bundle_count();
  std::erase_if(candidates, [&](const DiscreteAssignment& a) {
    const auto discrete = from_discrete(a, bundles);
    if (!find_generalized_cycle(instance, discrete)) return false;
    return !check_sd_efficiency(instance, discrete).pass;
  });
  auto result = decompose(instance, assignment, candidates);
  if (auto* lottery = std::get_if<Lottery>(&result)) {
    return PropertyReport{Property::ExPostEfficiency, true, Witness{std::move(*lottery)}, candidates.size(), {}};
  }
  return fail(Property::ExPostEfficiency, std::get<InfeasibilityCertificate>(std::move(result)), candidates.size(),
              "no lottery over sd-efficient discrete assignments reproduces the shares");
}

bool certifies_infeasibility(const InfeasibilityCertificate& certificate, const FractionalAssignment& assignment,
                             std::span<const DiscreteAssignment> candidates) {
  if (certificate.agents != assignment.agent_count() || certificate.bundles != assignment.bundle_count()) return false;
  Rational value = 0;
  for (AgentIndex j = 0; j < certificate.agents; ++j) {
    for (BundleIndex x = 0; x < certificate.bundles; ++x) value += certificate.at(j, x) * assignment.at(j, x);
  }
  if (value >= 0) return false;
  for (const auto& a : candidates) {
    Rational total = 0;
    for (AgentIndex j = 0; j < a.bundle_of.size(); ++j) total += certificate.at(j, a.bundle_of[j]);
    if (total < 0) return false;
  }
  return true;
}

std::vector<Tiebreaks> default_tiebreak_sets(const Instance& instance) {
  const auto n = instance.agent_count();
  const auto b = instance.bundle_count();
  return {Tiebreaks::uniform(n, LinearOrder::canonical(b)), Tiebreaks::uniform(n, LinearOrder::reversed_canonical(b))};
}

std::string_view misreport_space_name(MisreportSpace::Kind kind) {
  switch (kind) {
    case MisreportSpace::Kind::LinearOrders: return "linear orders";
    case MisreportSpace::Kind::CpNets: return "CP-nets over the agent's dependency graph";
    case MisreportSpace::Kind::IndependentCpNets: return "independent CP-nets";
    case MisreportSpace::Kind::Explicit: return "explicit list";
  }
  return "";
}

namespace {

std::vector<std::vector<std::size_t>> dependency_of(const Instance& instance, AgentIndex agent) {
  const auto& net = instance.preference(agent).cpnet;
  if (net) {
    std::vector<std::vector<std::size_t>> parents;
    for (std::size_t t = 0; t < instance.space().type_count(); ++t) parents.push_back(net->parents(t));
    return parents;
  }
  return std::vector<std::vector<std::size_t>>(instance.space().type_count());
}

void require_cpnet_budget(const Instance& instance, const std::vector<std::vector<std::size_t>>& parents) {
  const auto count = count_cpnets(instance.space(), parents);
  if (count > kMaxMisreportsPerAgent) {
    throw Error(ErrorKind::MisreportSpaceTooLarge, std::to_string(count) + " CP-nets per agent exceed the limit of " +
                                                       std::to_string(kMaxMisreportsPerAgent));
  }
}

// Calls `visit` with every report of the space for `agent`; stops when it returns false.
void for_each_report(const Instance& instance, const MisreportSpace& space, AgentIndex agent,
                     const std::function<bool(const AgentPreference&)>& visit) {
  const auto bundles = instance.bundle_count();
  switch (space.kind) {
    case MisreportSpace::Kind::LinearOrders:
      for_each_linear_order(bundles, [&](const LinearOrder& order) {
        return visit(AgentPreference::from_order(PartialOrder::from_sequence(bundles, order.sequence)));
      });
      return;
    case MisreportSpace::Kind::CpNets:
    case MisreportSpace::Kind::IndependentCpNets: {
      const auto parents = space.kind == MisreportSpace::Kind::CpNets
                               ? dependency_of(instance, agent)
                               : std::vector<std::vector<std::size_t>>(instance.space().type_count());
      for_each_cpnet(instance.space(), parents, [&](const CPNet& net) { return visit(AgentPreference::from_cpnet(net)); });
      return;
    }
    case MisreportSpace::Kind::Explicit:
      for (const auto& [who, report] : space.reports) {
        if (who == agent && !visit(report)) return;
      }
      return;
  }
}

void require_misreport_budget(const Instance& instance, const MisreportSpace& space) {
  switch (space.kind) {
    case MisreportSpace::Kind::LinearOrders:
      if (instance.bundle_count() > kMaxLinearOrderBundles) {
        throw Error(ErrorKind::MisreportSpaceTooLarge,
                    "linear-order misreports need at most " + std::to_string(kMaxLinearOrderBundles) + " bundles, got " +
                        std::to_string(instance.bundle_count()));
      }
      return;
    case MisreportSpace::Kind::CpNets:
      for (AgentIndex j = 0; j < instance.agent_count(); ++j) require_cpnet_budget(instance, dependency_of(instance, j));
      return;
    case MisreportSpace::Kind::IndependentCpNets:
      require_cpnet_budget(instance, std::vector<std::vector<std::size_t>>(instance.space().type_count()));
      return;
    case MisreportSpace::Kind::Explicit:
      for (const auto& [who, report] : space.reports) {
        if (who >= instance.agent_count() || report.order.universe() != instance.bundle_count()) {
          throw Error(ErrorKind::UniverseMismatch, "explicit report does not fit the instance");
        }
      }
      return;
  }
}

std::vector<Tiebreaks> resolve_tiebreaks(const Instance& instance, std::span<const Tiebreaks> sets) {
  if (sets.empty()) return default_tiebreak_sets(instance);
  return {sets.begin(), sets.end()};
}

}  // namespace

PropertyReport check_strategyproofness(Mechanism mechanism, const Instance& instance, const MisreportSpace& space,
                                       SpStrength strength, std::span<const Tiebreaks> tiebreak_sets) {
  require_misreport_budget(instance, space);
  const Property property =
      strength == SpStrength::Sd ? Property::SdStrategyproofness : Property::WeakSdStrategyproofness;
  const auto sets = resolve_tiebreaks(instance, tiebreak_sets);
  const auto& bundle_space = instance.space();
  std::size_t cases = 0;
  std::optional<Misreport> found;

  for (std::size_t t = 0; t < sets.size() && !found; ++t) {
    const auto truthful_sorts = sort_profile(instance, sets[t]);
    const auto truthful = run_mechanism(mechanism, bundle_space, truthful_sorts);
    for (AgentIndex j = 0; j < instance.agent_count() && !found; ++j) {
      // Outcomes depend on reports only through their sorts.
      std::set<std::vector<BundleIndex>> seen{truthful_sorts[j].sequence};
      for_each_report(instance, space, j, [&](const AgentPreference& report) {
        ++cases;
        auto sorts = truthful_sorts;
        sorts[j] = topological_sort(report.order, sets[t].per_agent[j]);
        if (!seen.insert(sorts[j].sequence).second) return true;
        auto outcome = run_mechanism(mechanism, bundle_space, sorts);
        const auto& order = instance.order(j);
        const bool violated =
            strength == SpStrength::Sd
                ? !sd_compare(order, truthful.row(j), outcome.row(j)).p_dominates_q
                : sd_compare(order, outcome.row(j), truthful.row(j)).p_dominates_q && !rows_equal(outcome, j, truthful, j);
        if (violated) found = Misreport{j, report, t, truthful, std::move(outcome)};
        return !found;
      });
    }
  }
  const std::string scope =
      std::string(misreport_space_name(space.kind)) + ", " + std::to_string(sets.size()) + " tiebreak sets";
  if (found) {
    return fail(property, std::move(*found), cases, "misreport gains over truth-telling (" + scope + ")");
  }
  return pass(property, cases, scope);
}

PropertyReport check_upper_invariance(Mechanism mechanism, const Instance& instance, const TransformSource& source,
                                      std::span<const Tiebreaks> tiebreak_sets) {
  const auto sets = resolve_tiebreaks(instance, tiebreak_sets);
  const auto& bundle_space = instance.space();
  const auto bundles = instance.bundle_count();
  if (source.kind == TransformSource::Kind::CpNets) {
    for (AgentIndex j = 0; j < instance.agent_count(); ++j) require_cpnet_budget(instance, dependency_of(instance, j));
  }
  for (const auto& tr : source.transforms) {
    if (tr.agent >= instance.agent_count() || tr.updated.order.universe() != bundles || tr.pivot >= bundles) {
      throw Error(ErrorKind::UniverseMismatch, "transformation does not fit the instance");
    }
  }

  std::size_t cases = 0;
  std::optional<InvarianceViolation> found;
  for (std::size_t t = 0; t < sets.size() && !found; ++t) {
    const auto truthful_sorts = sort_profile(instance, sets[t]);
    const auto truthful = run_mechanism(mechanism, bundle_space, truthful_sorts);

    // Evaluates one valid transformation at each of `pivots`; returns false on a violation.
    auto evaluate = [&](AgentIndex j, const AgentPreference& updated,
                        const std::vector<std::pair<BundleIndex, std::vector<BundleIndex>>>& pivots) {
      if (pivots.empty()) return true;
      auto sorts = truthful_sorts;
      sorts[j] = topological_sort(updated.order, sets[t].per_agent[j]);
      auto outcome = run_mechanism(mechanism, bundle_space, sorts);
      for (const auto& [pivot, removed] : pivots) {
        ++cases;
        for (AgentIndex k = 0; k < instance.agent_count(); ++k) {
          if (outcome.at(k, pivot) != truthful.at(k, pivot)) {
            found = InvarianceViolation{j, updated, pivot, removed, t, truthful, std::move(outcome)};
            return false;
          }
        }
      }
      return true;
    };

    switch (source.kind) {
      case TransformSource::Kind::Explicit:
        for (const auto& tr : source.transforms) {
          const auto verdict = is_uit(instance.order(tr.agent), tr.updated.order, tr.pivot, truthful.row(tr.agent));
          if (!verdict.valid) continue;
          if (!evaluate(tr.agent, tr.updated, {{tr.pivot, verdict.removed}})) break;
        }
        break;
      case TransformSource::Kind::GeneratedDeletions:
        for (AgentIndex j = 0; j < instance.agent_count() && !found; ++j) {
          const auto& order = instance.order(j);
          for (BundleIndex pivot = 0; pivot < bundles && !found; ++pivot) {
            std::vector<BundleIndex> deletable;
            for (auto y : upper_contour_set(order, pivot)) {
              if (y != pivot && truthful.at(j, y) == 0) deletable.push_back(y);
            }
            // Subsets of size 1..max_removed in lexicographic order.
            std::vector<std::vector<BundleIndex>> subsets;
            std::function<void(std::size_t, std::vector<BundleIndex>&)> grow = [&](std::size_t from,
                                                                                  std::vector<BundleIndex>& current) {
              for (std::size_t i = from; i < deletable.size(); ++i) {
                current.push_back(deletable[i]);
                subsets.push_back(current);
                if (current.size() < source.max_removed) grow(i + 1, current);
                current.pop_back();
              }
            };
            std::vector<BundleIndex> current;
            if (source.max_removed > 0) grow(0, current);
            for (const auto& removed : subsets) {
              auto updated = delete_from_upper_contour(order, pivot, removed);
              const auto verdict = is_uit(order, updated, pivot, truthful.row(j));
              if (!verdict.valid) throw std::logic_error("generated deletion is not upper invariant: " + verdict.reason);
              if (!evaluate(j, AgentPreference::from_order(std::move(updated)), {{pivot, verdict.removed}})) break;
            }
          }
        }
        break;
      case TransformSource::Kind::CpNets:
        for (AgentIndex j = 0; j < instance.agent_count() && !found; ++j) {
          const auto& order = instance.order(j);
          for_each_cpnet(bundle_space, dependency_of(instance, j), [&](const CPNet& net) {
            auto updated = AgentPreference::from_cpnet(net);
            std::vector<std::pair<BundleIndex, std::vector<BundleIndex>>> pivots;
            for (BundleIndex pivot = 0; pivot < bundles; ++pivot) {
              auto verdict = is_uit(order, updated.order, pivot, truthful.row(j));
              if (verdict.valid) pivots.emplace_back(pivot, std::move(verdict.removed));
            }
            return evaluate(j, updated, pivots);
          });
        }
        break;
    }
  }
  if (found) {
    return fail(Property::UpperInvariance, std::move(*found), cases,
                "shares of the pivot bundle change under an upper invariant transformation");
  }
  return pass(Property::UpperInvariance, cases, std::to_string(sets.size()) + " tiebreak sets");
}

namespace {

std::string agent_label(AgentIndex j) { return "agent " + std::to_string(j + 1); }

std::string row_text(const Instance& instance, std::span<const Rational> row) {
  std::string out = "{";
  bool first = true;
  for (BundleIndex x = 0; x < row.size(); ++x) {
    if (row[x] == 0) continue;
    if (!first) out += ", ";
    first = false;
    out += instance.bundle_name(x) + ": " + to_string(row[x]);
  }
  return out + "}";
}

}  // namespace

std::string describe_report(const Instance& instance, const PropertyReport& report) {
  std::string out = std::string(property_name(report.property)) + ": " + (report.pass ? "PASS" : "FAIL");
  if (!report.detail.empty()) out += " (" + report.detail + ")";
  if (report.pass || !report.witness) return out;
  out += "; ";
  std::visit(
      [&](const auto& w) {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, DominatingAssignment>) {
          out += "dominated by";
          for (AgentIndex j = 0; j < w.assignment.agent_count(); ++j) {
            out += " " + agent_label(j) + " " + row_text(instance, w.assignment.row(j));
          }
        } else if constexpr (std::is_same_v<T, AgentPair>) {
          out += agent_label(w.agent) + " vs " + agent_label(w.other);
        } else if constexpr (std::is_same_v<T, FairnessViolation>) {
          out += "bundle " + instance.bundle_name(w.bundle) + ", " + agent_label(w.agent) + " vs " +
                 agent_label(w.other);
        } else if constexpr (std::is_same_v<T, Lottery>) {
          out += std::to_string(w.outcomes.size()) + " outcomes";
        } else if constexpr (std::is_same_v<T, InfeasibilityCertificate>) {
          out += "Farkas certificate available";
        } else if constexpr (std::is_same_v<T, Misreport>) {
          out += agent_label(w.agent) + " truthful " + row_text(instance, w.truthful.row(w.agent)) + ", misreport " +
                 row_text(instance, w.misreported.row(w.agent));
        } else if constexpr (std::is_same_v<T, InvarianceViolation>) {
          out += agent_label(w.agent) + " at " + instance.bundle_name(w.pivot) + ", column before";
          for (AgentIndex k = 0; k < w.truthful.agent_count(); ++k) out += " " + to_string(w.truthful.at(k, w.pivot));
          out += ", after";
          for (AgentIndex k = 0; k < w.transformed.agent_count(); ++k) {
            out += " " + to_string(w.transformed.at(k, w.pivot));
          }
        }
      },
      *report.witness);
  return out;
}

}  // namespace mtra
