#pragma once

#include <vector>

#include "eliminax/engine.hpp"
#include "eliminax/lp.hpp"

namespace eliminax::testsupport {

// Independent brute-force check for tiny LPs (meant for <= 3 variables and
// <= 6 constraints). Feasible basic points are enumerated by intersecting
// every n-subset of the constraint hyperplanes and the coordinate planes;
// since {x >= 0} contains no line, a nonempty feasible region has such a
// vertex. Unboundedness is decided by enumerating the vertices of the
// normalized recession cone and testing the objective on them. The optimal
// value (not the witness) is comparable with lp_solve.
LpResult lp_oracle(const LinearProgram& lp);

// The feasible vertices themselves, for feasibility cross-checks.
std::vector<std::vector<Rational>> oracle_feasible_vertices(
    const std::vector<std::vector<Rational>>& rows, const std::vector<RowSense>& senses,
    const std::vector<Rational>& rhs, std::size_t variables);

// 1-3 variables, 0-6 constraints of random sense, every coefficient a
// ratio of integers drawn from [-5, 5] (denominators from [1, 5]).
LinearProgram random_small_lp(SplitMix64& rng);

}  // namespace eliminax::testsupport
