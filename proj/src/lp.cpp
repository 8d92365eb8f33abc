#include "mtra/lp.hpp"

#include "mtra/error.hpp"

#include <stdexcept>

namespace mtra::lp {

LinearProgram::LinearProgram(std::size_t variables) : names_(variables) {}

std::size_t LinearProgram::add_variable(std::string name) {
  names_.push_back(std::move(name));
  return names_.size() - 1;
}

void LinearProgram::add_constraint(std::vector<Term> terms, Relation relation, Rational rhs) {
  for (const auto& [index, coefficient] : terms) {
    if (index >= names_.size()) throw Error(ErrorKind::DimensionMismatch, "constraint references unknown variable");
  }
  constraints_.push_back({std::move(terms), relation, std::move(rhs)});
}

void LinearProgram::add_dense_constraint(std::span<const Rational> coefficients, Relation relation, Rational rhs) {
  if (coefficients.size() != names_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "coefficient vector does not match variable count");
  }
  std::vector<Term> terms;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (coefficients[i] != 0) terms.emplace_back(i, coefficients[i]);
  }
  constraints_.push_back({std::move(terms), relation, std::move(rhs)});
}

void LinearProgram::maximize(std::vector<Term> objective) {
  for (const auto& [index, coefficient] : objective) {
    if (index >= names_.size()) throw Error(ErrorKind::DimensionMismatch, "objective references unknown variable");
  }
  objective_ = std::move(objective);
}

Rational evaluate(std::span<const Term> terms, std::span<const Rational> values) {
  Rational total = 0;
  for (const auto& [index, coefficient] : terms) total += coefficient * values[index];
  return total;
}

bool satisfies(const LinearProgram& program, std::span<const Rational> values) {
  if (values.size() != program.variable_count()) return false;
  for (const auto& v : values) {
    if (v < 0) return false;
  }
  for (const auto& c : program.constraints()) {
    const Rational lhs = evaluate(c.terms, values);
    switch (c.relation) {
      case Relation::LessEqual:
        if (lhs > c.rhs) return false;
        break;
      case Relation::Equal:
        if (lhs != c.rhs) return false;
        break;
      case Relation::GreaterEqual:
        if (lhs < c.rhs) return false;
        break;
    }
  }
  return true;
}

namespace {

// Row-major tableau; column `width - 1` is the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t columns) : rows_(rows), width_(columns + 1), cells_(rows * width_, Rational(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t columns() const { return width_ - 1; }
  Rational& at(std::size_t r, std::size_t c) { return cells_[r * width_ + c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return cells_[r * width_ + c]; }
  Rational& rhs(std::size_t r) { return at(r, width_ - 1); }

  void erase_row(std::size_t r) {
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(r * width_),
                 cells_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width_));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t width_;
  std::vector<Rational> cells_;
};

struct Simplex {
  Tableau tab;
  std::vector<Rational> cost;  // reduced-cost row, last entry is the objective value
  std::vector<std::size_t> basis;

  void pivot(std::size_t row, std::size_t column) {
    const std::size_t width = tab.columns() + 1;
    const Rational pivot_value = tab.at(row, column);
    for (std::size_t c = 0; c < width; ++c) {
      if (tab.at(row, c) != 0) tab.at(row, c) /= pivot_value;
    }
    Rational factor;
    for (std::size_t r = 0; r < tab.rows(); ++r) {
      if (r == row || tab.at(r, column) == 0) continue;
      factor = tab.at(r, column);
      for (std::size_t c = 0; c < width; ++c) {
        if (tab.at(row, c) != 0) tab.at(r, c) -= factor * tab.at(row, c);
      }
    }
    if (cost[column] != 0) {
      factor = cost[column];
      for (std::size_t c = 0; c < width; ++c) {
        if (tab.at(row, c) != 0) cost[c] -= factor * tab.at(row, c);
      }
    }
    basis[row] = column;
  }

  // Maximizes over columns below `allowed`. Returns false when unbounded.
  bool run(std::size_t allowed) {
    while (true) {
      std::size_t entering = allowed;
      for (std::size_t c = 0; c < allowed; ++c) {
        if (cost[c] < 0) {
          entering = c;
          break;
        }
      }
      if (entering == allowed) return true;
      std::size_t leaving = tab.rows();
      Rational best_ratio;
      for (std::size_t r = 0; r < tab.rows(); ++r) {
        if (tab.at(r, entering) <= 0) continue;
        Rational ratio = tab.rhs(r) / tab.at(r, entering);
        if (leaving == tab.rows() || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (leaving == tab.rows()) return false;
      pivot(leaving, entering);
    }
  }
};

}  // namespace

Outcome solve(const LinearProgram& program) {
  const std::size_t vars = program.variable_count();
  const auto& constraints = program.constraints();
  const std::size_t m = constraints.size();

  // Column layout: originals, one slack/surplus per inequality, one artificial
  // per >= or = row.
  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  std::vector<Relation> relation(m);
  std::vector<bool> flip(m);
  for (std::size_t i = 0; i < m; ++i) {
    flip[i] = constraints[i].rhs < 0;
    relation[i] = constraints[i].relation;
    if (flip[i] && relation[i] != Relation::Equal) {
      relation[i] = relation[i] == Relation::LessEqual ? Relation::GreaterEqual : Relation::LessEqual;
    }
    if (relation[i] != Relation::Equal) ++slack_count;
    if (relation[i] != Relation::LessEqual) ++artificial_count;
  }
  const std::size_t artificial_begin = vars + slack_count;
  const std::size_t columns = artificial_begin + artificial_count;

  Simplex sx{Tableau(m, columns), std::vector<Rational>(columns + 1, Rational(0)), std::vector<std::size_t>(m)};
  std::size_t next_slack = vars;
  std::size_t next_artificial = artificial_begin;
  for (std::size_t i = 0; i < m; ++i) {
    const Rational sign = flip[i] ? -1 : 1;
    for (const auto& [index, coefficient] : constraints[i].terms) sx.tab.at(i, index) += sign * coefficient;
    sx.tab.rhs(i) = sign * constraints[i].rhs;
    switch (relation[i]) {
      case Relation::LessEqual:
        sx.tab.at(i, next_slack) = 1;
        sx.basis[i] = next_slack++;
        break;
      case Relation::GreaterEqual:
        sx.tab.at(i, next_slack++) = -1;
        sx.tab.at(i, next_artificial) = 1;
        sx.basis[i] = next_artificial++;
        break;
      case Relation::Equal:
        sx.tab.at(i, next_artificial) = 1;
        sx.basis[i] = next_artificial++;
        break;
    }
  }

  // Phase 1: maximize minus the sum of artificials.
  for (std::size_t c = artificial_begin; c < columns; ++c) sx.cost[c] = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (sx.basis[i] < artificial_begin) continue;
    for (std::size_t c = 0; c <= columns; ++c) {
      if (sx.tab.at(i, c) != 0) sx.cost[c] -= sx.tab.at(i, c);
    }
  }
  sx.run(columns);
  if (sx.cost[columns] != 0) return Outcome{Status::Infeasible, {}, 0};

  // Drive zero-valued artificials out of the basis; rows where that is
  // impossible are redundant.
  for (std::size_t i = 0; i < sx.tab.rows();) {
    if (sx.basis[i] < artificial_begin) {
      ++i;
      continue;
    }
    std::size_t column = artificial_begin;
    for (std::size_t c = 0; c < artificial_begin; ++c) {
      if (sx.tab.at(i, c) != 0) {
        column = c;
        break;
      }
    }
    if (column == artificial_begin) {
      sx.tab.erase_row(i);
      sx.basis.erase(sx.basis.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      sx.pivot(i, column);
      ++i;
    }
  }

  // Phase 2 over the structural and slack columns.
  std::fill(sx.cost.begin(), sx.cost.end(), Rational(0));
  std::vector<Rational> objective(columns, Rational(0));
  for (const auto& [index, coefficient] : program.objective()) objective[index] += coefficient;
  for (std::size_t c = 0; c < vars; ++c) sx.cost[c] = -objective[c];
  for (std::size_t i = 0; i < sx.tab.rows(); ++i) {
    const Rational& cb = objective[sx.basis[i]];
    if (cb == 0) continue;
    for (std::size_t c = 0; c <= columns; ++c) {
      if (sx.tab.at(i, c) != 0) sx.cost[c] += cb * sx.tab.at(i, c);
    }
  }
  if (!sx.run(artificial_begin)) return Outcome{Status::Unbounded, {}, 0};

  Outcome out{Status::Optimal, std::vector<Rational>(vars, Rational(0)), sx.cost[columns]};
  for (std::size_t i = 0; i < sx.tab.rows(); ++i) {
    if (sx.basis[i] < vars) out.values[sx.basis[i]] = sx.tab.rhs(i);
  }
  if (!satisfies(program, out.values) || evaluate(program.objective(), out.values) != out.objective) {
    throw std::logic_error("simplex produced a witness that violates its own program");
  }
  return out;
}

Outcome feasibility(const LinearProgram& program) {
  LinearProgram plain(program.variable_count());
  for (const auto& c : program.constraints()) plain.add_constraint(c.terms, c.relation, c.rhs);
  return solve(plain);
}

}  // namespace mtra::lp
