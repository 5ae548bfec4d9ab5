#pragma once

#include <vector>

#include "qif/rational.hpp"

namespace qif {

/// Outcome of an exact feasibility question  A x = c,  x >= 0.
/// Exactly one of x / farkas is meaningful:
///  - feasible: x satisfies the system exactly;
///  - infeasible: farkas y satisfies yT A <= 0 (componentwise) and yT c > 0,
///    an exact certificate that no solution exists.
struct LpResult {
    bool feasible = false;
    std::vector<Rat> x;
    std::vector<Rat> farkas;
};

/// Decide feasibility of A x = c, x >= 0 with an exact-rational phase-1
/// simplex (Bland's rule, hence finite). A is dense row-major, m x n.
LpResult solve_eq_nonneg(const std::vector<std::vector<Rat>>& a,
                         const std::vector<Rat>& c);

} // namespace qif
