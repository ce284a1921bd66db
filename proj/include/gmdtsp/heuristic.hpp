#pragma once

#include <optional>

#include "gmdtsp/model.hpp"

namespace gmdtsp {

struct VisitSelection {
    std::vector<char> selected;  // per target

    std::vector<int> targets() const {
        std::vector<int> out;
        for (size_t t = 0; t < selected.size(); ++t)
            if (selected[t]) out.push_back(static_cast<int>(t));
        return out;
    }
};

/// y_i = 1 iff y*_i >= 0.5; clusters left empty take their argmax target
/// (tie -> lowest id).
VisitSelection round_selection(const FractionalPoint& point, const Instance& inst);

/// Nearest-depot assignment, per-depot nearest-neighbor + 2-opt, then
/// inter-depot relocate/swap with strict improvement. Output passes
/// check_feasible.
IntegerSolution mdtsp_construct_improve(const Instance& inst, const VisitSelection& sel);

/// LP-rounding heuristic: returns the point itself when it is integral and
/// feasible, otherwise rounds and builds a tour set.
std::optional<IntegerSolution> run_heuristic(const FractionalPoint& point, const Instance& inst);

}  // namespace gmdtsp
