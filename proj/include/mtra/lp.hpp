#pragma once

#include "mtra/rational.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mtra::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };

using Term = std::pair<std::size_t, Rational>;

struct Constraint {
  std::vector<Term> terms;  // sparse; repeated indices are summed
  Relation relation = Relation::Equal;
  Rational rhs = 0;
};

// Linear program over nonnegative variables, optionally maximizing an objective.
class LinearProgram {
 public:
  LinearProgram() = default;
  explicit LinearProgram(std::size_t variables);

  std::size_t add_variable(std::string name = {});
  std::size_t variable_count() const { return names_.size(); }
  const std::string& variable_name(std::size_t index) const { return names_[index]; }

  void add_constraint(std::vector<Term> terms, Relation relation, Rational rhs);
  void add_dense_constraint(std::span<const Rational> coefficients, Relation relation, Rational rhs);
  void maximize(std::vector<Term> objective);

  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Term>& objective() const { return objective_; }
  bool has_objective() const { return !objective_.empty(); }

 private:
  std::vector<std::string> names_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Outcome {
  Status status = Status::Infeasible;
  std::vector<Rational> values;  // empty unless Optimal
  Rational objective = 0;
};

// Two-phase dense tableau simplex with Bland's rule. An Optimal outcome's
// witness has been re-checked against every constraint.
Outcome solve(const LinearProgram& program);

// Same as solve with the objective dropped.
Outcome feasibility(const LinearProgram& program);

bool satisfies(const LinearProgram& program, std::span<const Rational> values);
Rational evaluate(std::span<const Term> terms, std::span<const Rational> values);

}  // namespace mtra::lp
