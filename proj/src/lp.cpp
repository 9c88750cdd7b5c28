#include "eliminax/lp.hpp"

#include <string>

namespace eliminax {

namespace {

// Full tableau over exact rationals. Columns 0..total-1 are variables
// (structural, then slack/surplus, then artificial), the last column is
// the right-hand side, kept nonnegative throughout.
struct Tableau {
  std::vector<std::vector<Rational>> rows;
  std::vector<int> basis;   // basis[r] = column basic in row r
  int columns = 0;          // variable columns, excluding rhs
  std::vector<char> artificial;  // per column

  Rational& at(int r, int c) { return rows[r][c]; }
  Rational& rhs(int r) { return rows[r][columns]; }
};

void pivot(Tableau& t, int row, int col) {
  const Rational p = t.at(row, col);
  for (auto& v : t.rows[row]) v /= p;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (static_cast<int>(r) == row || t.at(r, col) == 0) continue;
    const Rational factor = t.at(r, col);
    for (int c = 0; c <= t.columns; ++c) t.rows[r][c] -= factor * t.rows[row][c];
  }
  t.basis[row] = col;
}

Rational reduced_cost(const Tableau& t, const std::vector<Rational>& cost, int col) {
  Rational d = cost[col];
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const Rational& c_b = cost[t.basis[r]];
    if (c_b != 0) d -= c_b * t.rows[r][col];
  }
  return d;
}

// Maximizes cost over the current tableau with Bland's rule: the entering
// column is the lowest-index one with positive reduced cost, ties in the
// ratio test break toward the lowest basis index. Returns false when
// unbounded.
bool simplex(Tableau& t, const std::vector<Rational>& cost, bool allow_artificial_entering) {
  const int m = static_cast<int>(t.rows.size());
  for (;;) {
    int enter = -1;
    for (int j = 0; j < t.columns; ++j) {
      if (!allow_artificial_entering && t.artificial[j]) continue;
      if (reduced_cost(t, cost, j) > 0) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;

    int leave = -1;
    Rational best;
    for (int r = 0; r < m; ++r) {
      if (t.at(r, enter) <= 0) continue;
      const Rational ratio = t.rhs(r) / t.at(r, enter);
      if (leave < 0 || ratio < best || (ratio == best && t.basis[r] < t.basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) return false;
    pivot(t, leave, enter);
  }
}

Rational objective_value(const Tableau& t, const std::vector<Rational>& cost) {
  Rational v = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (cost[t.basis[r]] != 0) v += cost[t.basis[r]] * t.rows[r][t.columns];
  }
  return v;
}

void validate(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  if (lp.rows.size() != lp.senses.size() || lp.rows.size() != lp.rhs.size())
    throw DimensionMismatch("rows, senses and rhs must have equal length");
  for (const auto& row : lp.rows) {
    if (row.size() != n)
      throw DimensionMismatch("constraint row width " + std::to_string(row.size()) +
                              " does not match objective width " + std::to_string(n));
  }
}

// Builds the phase-one tableau and drives it to a basic feasible solution.
// Returns false when the system is infeasible.
bool phase_one(const LinearProgram& lp, Tableau& t) {
  const int n = static_cast<int>(lp.objective.size());
  const int m = static_cast<int>(lp.rows.size());

  struct RowPlan {
    std::vector<Rational> coeff;
    Rational b;
    RowSense sense;
  };
  std::vector<RowPlan> plan(m);
  int slack_count = 0;
  for (int r = 0; r < m; ++r) {
    plan[r] = {lp.rows[r], lp.rhs[r], lp.senses[r]};
    if (plan[r].b < 0) {
      for (auto& v : plan[r].coeff) v = -v;
      plan[r].b = -plan[r].b;
      if (plan[r].sense == RowSense::Leq)
        plan[r].sense = RowSense::Geq;
      else if (plan[r].sense == RowSense::Geq)
        plan[r].sense = RowSense::Leq;
    }
    if (plan[r].sense != RowSense::Eq) ++slack_count;
  }

  int artificial_count = 0;
  for (const auto& row : plan)
    if (row.sense != RowSense::Leq) ++artificial_count;

  t.columns = n + slack_count + artificial_count;
  t.artificial.assign(t.columns, 0);
  t.rows.assign(m, std::vector<Rational>(t.columns + 1, Rational(0)));
  t.basis.assign(m, -1);

  int slack_at = n;
  int artificial_at = n + slack_count;
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) t.at(r, c) = plan[r].coeff[c];
    t.rhs(r) = plan[r].b;
    switch (plan[r].sense) {
      case RowSense::Leq:
        t.at(r, slack_at) = 1;
        t.basis[r] = slack_at++;
        break;
      case RowSense::Geq:
        t.at(r, slack_at) = -1;
        ++slack_at;
        t.artificial[artificial_at] = 1;
        t.at(r, artificial_at) = 1;
        t.basis[r] = artificial_at++;
        break;
      case RowSense::Eq:
        t.artificial[artificial_at] = 1;
        t.at(r, artificial_at) = 1;
        t.basis[r] = artificial_at++;
        break;
    }
  }

  if (artificial_count == 0) return true;

  std::vector<Rational> cost(t.columns, Rational(0));
  for (int c = 0; c < t.columns; ++c)
    if (t.artificial[c]) cost[c] = -1;
  simplex(t, cost, true);  // bounded above by 0, never unbounded
  if (objective_value(t, cost) != 0) return false;

  // Drive any remaining artificial out of the basis; a row with no
  // non-artificial entry left is redundant and dropped.
  for (int r = static_cast<int>(t.rows.size()) - 1; r >= 0; --r) {
    if (!t.artificial[t.basis[r]]) continue;
    int col = -1;
    for (int c = 0; c < t.columns; ++c) {
      if (!t.artificial[c] && t.at(r, c) != 0) {
        col = c;
        break;
      }
    }
    if (col >= 0) {
      pivot(t, r, col);  // rhs is 0 here, so feasibility is preserved
    } else {
      t.rows.erase(t.rows.begin() + r);
      t.basis.erase(t.basis.begin() + r);
    }
  }
  return true;
}

std::vector<Rational> extract_witness(const Tableau& t, int n) {
  std::vector<Rational> x(n, Rational(0));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.basis[r] < n) x[t.basis[r]] = t.rows[r][t.columns];
  }
  return x;
}

void verify_witness(const LinearProgram& lp, const std::vector<Rational>& x,
                    const Rational* expected_value) {
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    Rational lhs = 0;
    for (std::size_t c = 0; c < x.size(); ++c) lhs += lp.rows[r][c] * x[c];
    const bool ok = lp.senses[r] == RowSense::Leq   ? lhs <= lp.rhs[r]
                    : lp.senses[r] == RowSense::Geq ? lhs >= lp.rhs[r]
                                                    : lhs == lp.rhs[r];
    if (!ok) throw std::logic_error("simplex witness violates constraint " + std::to_string(r));
  }
  for (const auto& v : x) {
    if (v < 0) throw std::logic_error("simplex witness has a negative variable");
  }
  if (expected_value) {
    Rational value = 0;
    for (std::size_t c = 0; c < x.size(); ++c) value += lp.objective[c] * x[c];
    if (value != *expected_value) throw std::logic_error("simplex witness misses its objective");
  }
}

}  // namespace

LpResult lp_solve(const LinearProgram& lp) {
  validate(lp);
  Tableau t;
  if (!phase_one(lp, t)) return {LpStatus::Infeasible, {}, {}};

  std::vector<Rational> cost(t.columns, Rational(0));
  for (std::size_t c = 0; c < lp.objective.size(); ++c) cost[c] = lp.objective[c];
  if (!simplex(t, cost, false)) return {LpStatus::Unbounded, {}, {}};

  LpResult result;
  result.status = LpStatus::Optimal;
  result.value = objective_value(t, cost);
  result.witness = extract_witness(t, static_cast<int>(lp.objective.size()));
  verify_witness(lp, result.witness, &result.value);
  return result;
}

std::optional<std::vector<Rational>> lp_feasible(const std::vector<std::vector<Rational>>& rows,
                                                 const std::vector<RowSense>& senses,
                                                 const std::vector<Rational>& rhs) {
  LinearProgram lp;
  lp.objective.assign(rows.empty() ? 0 : rows.front().size(), Rational(0));
  lp.rows = rows;
  lp.senses = senses;
  lp.rhs = rhs;
  validate(lp);

  Tableau t;
  if (!phase_one(lp, t)) return std::nullopt;
  auto x = extract_witness(t, static_cast<int>(lp.objective.size()));
  verify_witness(lp, x, nullptr);
  return x;
}

}  // namespace eliminax
