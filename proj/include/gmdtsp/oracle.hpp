#pragma once

#include <cstdint>
#include <functional>

#include "gmdtsp/model.hpp"

namespace gmdtsp {

/// Exhaustive solvers for small instances; independent of the LP/cut path.
/// Feasible solutions are exactly those check_feasible accepts: depot-rooted
/// simple cycles (several cycles may share a depot), at least one visited
/// target per cluster, no 2-paths.

constexpr int kOracleMaxTargets = 10;

/// Optimal cost by dynamic programming over target subsets: cheapest single
/// cycle per subset (any depot), then a set-partition DP, minimized over
/// cluster-covering subsets. Throws ContractError above kOracleMaxTargets.
int64_t oracle_optimum(const Instance& inst);

/// As oracle_optimum but reconstructs one optimal cycle set.
IntegerSolution oracle_solution(const Instance& inst);

/// Enumerates every feasible solution (including all cyclic orders) and
/// invokes the callback. Returns the number of solutions visited.
uint64_t enumerate_solutions(const Instance& inst,
                             const std::function<void(const IntegerSolution&)>& fn);

}  // namespace gmdtsp
