#pragma once

#include <utility>
#include <vector>

#include "gmdtsp/instance.hpp"

namespace gmdtsp {

struct ReductionLog {
    // (removed target, dominating target) as original file ids, removal order.
    std::vector<std::pair<int, int>> removed;
    int original_size = 0;
    int reduced_size = 0;
};

/// Dominance conditions 1-3 over the current instance. Requires
/// inst.triangle, i != j and j in i's cluster.
bool is_dominated(const Instance& inst, int i, int j);

/// Removes dominated targets until fixpoint. Each pass removes the lowest-id
/// removable target; mutual dominance keeps the lower id. Non-triangle
/// instances are returned unchanged with an empty log.
std::pair<Instance, ReductionLog> reduce(const Instance& inst);

}  // namespace gmdtsp
