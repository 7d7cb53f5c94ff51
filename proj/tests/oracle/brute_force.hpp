#pragma once

// Test-only oracle for coupling existence. It shares no code path with the
// LP engine: variables are ordered content by content, the constraint
// matrix is materialized densely from first principles, and feasibility is
// decided by Lawson-Hanson non-negative least squares over all
// deterministic couplings instead of simplex pivoting.

#include <cstddef>

#include "cbd/coupling.hpp"
#include "cbd/system.hpp"

namespace cbd::testing {

inline constexpr std::size_t kOracleMaxVariables = 12;

/// Same contract as cbd::decide. The witness, when feasible, lists
/// variables content by content. Throws UnsupportedError beyond
/// kOracleMaxVariables variables or for connections larger than two.
FeasibilityVerdict brute_force_decide(const System& sys, CouplingConstraint c);

/// Pr[X = Y] maximized over all couplings of binary X, Y with
/// Pr[X=+1] = a, Pr[Y=+1] = b, by enumerating the vertices of the 2x2
/// transportation polytope.
double brute_force_max_equality(double a, double b);

}  // namespace cbd::testing
