#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "eliminax/rational.hpp"

namespace eliminax {

enum class RowSense { Leq, Geq, Eq };

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// max objective · x subject to rows[r] · x (sense[r]) rhs[r]; every
// variable is implicitly >= 0. Free quantities are encoded by callers as
// differences of two nonnegative variables.
struct LinearProgram {
  std::vector<Rational> objective;
  std::vector<std::vector<Rational>> rows;
  std::vector<RowSense> senses;
  std::vector<Rational> rhs;
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;                 // set when Optimal
  std::vector<Rational> witness;  // set when Optimal
};

// Exact two-phase dense simplex with Bland's rule; terminates on every
// input. Optimal witnesses are re-verified against all constraints and the
// objective before returning.
LpResult lp_solve(const LinearProgram& lp);

// Phase one only: a feasible point of the system, or nullopt.
std::optional<std::vector<Rational>> lp_feasible(const std::vector<std::vector<Rational>>& rows,
                                                 const std::vector<RowSense>& senses,
                                                 const std::vector<Rational>& rhs);

}  // namespace eliminax
