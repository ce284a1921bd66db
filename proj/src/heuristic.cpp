#include "gmdtsp/heuristic.hpp"

#include <algorithm>
#include <cmath>

namespace gmdtsp {

namespace {

int64_t tour_cost(const Instance& inst, int depot, const std::vector<int>& seq) {
    if (seq.empty()) return 0;
    if (seq.size() == 1) return 2 * inst.cost_dt(depot, seq[0]);
    int64_t c = inst.cost_dt(depot, seq.front()) + inst.cost_dt(depot, seq.back());
    for (size_t i = 0; i + 1 < seq.size(); ++i) c += inst.cost_tt(seq[i], seq[i + 1]);
    return c;
}

// First-improvement 2-opt with the depot fixed at both ends.
void two_opt(const Instance& inst, int depot, std::vector<int>& seq) {
    if (seq.size() < 2) return;
    bool improved = true;
    while (improved) {
        improved = false;
        const int m = static_cast<int>(seq.size());
        for (int i = 0; i < m - 1 && !improved; ++i) {
            for (int j = i + 1; j < m && !improved; ++j) {
                // Reverse seq[i..j]; endpoints connect to depot when at the rim.
                int64_t before = (i == 0 ? inst.cost_dt(depot, seq[0]) : inst.cost_tt(seq[i - 1], seq[i])) +
                                 (j == m - 1 ? inst.cost_dt(depot, seq[j]) : inst.cost_tt(seq[j], seq[j + 1]));
                int64_t after = (i == 0 ? inst.cost_dt(depot, seq[j]) : inst.cost_tt(seq[i - 1], seq[j])) +
                                (j == m - 1 ? inst.cost_dt(depot, seq[i]) : inst.cost_tt(seq[i], seq[j + 1]));
                if (after < before) {
                    std::reverse(seq.begin() + i, seq.begin() + j + 1);
                    improved = true;
                }
            }
        }
    }
}

std::vector<int> nearest_neighbor(const Instance& inst, int depot, std::vector<int> todo) {
    std::vector<int> seq;
    int prev = -1;  // -1 means the depot
    std::sort(todo.begin(), todo.end());
    while (!todo.empty()) {
        size_t best = 0;
        for (size_t i = 1; i < todo.size(); ++i) {
            int64_t ci = prev < 0 ? inst.cost_dt(depot, todo[i]) : inst.cost_tt(prev, todo[i]);
            int64_t cb = prev < 0 ? inst.cost_dt(depot, todo[best]) : inst.cost_tt(prev, todo[best]);
            if (ci < cb) best = i;
        }
        prev = todo[best];
        seq.push_back(prev);
        todo.erase(todo.begin() + best);
    }
    return seq;
}

}  // namespace

VisitSelection round_selection(const FractionalPoint& point, const Instance& inst) {
    VisitSelection sel;
    sel.selected.assign(inst.num_targets, 0);
    for (int t = 0; t < inst.num_targets; ++t)
        if (point.y[t] >= 0.5) sel.selected[t] = 1;
    for (const auto& cluster : inst.clusters) {
        bool covered = false;
        for (int t : cluster) covered = covered || sel.selected[t];
        if (covered) continue;
        int best = cluster.front();
        for (int t : cluster)
            if (point.y[t] > point.y[best]) best = t;  // tie keeps the lowest id
        sel.selected[best] = 1;
    }
    return sel;
}

IntegerSolution mdtsp_construct_improve(const Instance& inst, const VisitSelection& sel) {
    const int k = inst.num_depots;
    std::vector<std::vector<int>> assigned(k);
    for (int t : sel.targets()) {
        int best = 0;
        for (int d = 1; d < k; ++d)
            if (inst.cost_dt(d, t) < inst.cost_dt(best, t)) best = d;
        assigned[best].push_back(t);
    }

    std::vector<std::vector<int>> tours(k);
    for (int d = 0; d < k; ++d) {
        tours[d] = nearest_neighbor(inst, d, assigned[d]);
        two_opt(inst, d, tours[d]);
    }

    auto total = [&]() {
        int64_t c = 0;
        for (int d = 0; d < k; ++d) c += tour_cost(inst, d, tours[d]);
        return c;
    };

    // Inter-depot improvement: relocate single targets, then swap pairs,
    // accepting strict decreases only.
    bool improved = true;
    while (improved) {
        improved = false;
        for (int d = 0; d < k && !improved; ++d) {
            for (size_t i = 0; i < tours[d].size() && !improved; ++i) {
                int t = tours[d][i];
                for (int e = 0; e < k && !improved; ++e) {
                    if (e == d) continue;
                    for (size_t pos = 0; pos <= tours[e].size() && !improved; ++pos) {
                        int64_t before = tour_cost(inst, d, tours[d]) + tour_cost(inst, e, tours[e]);
                        auto nd = tours[d];
                        nd.erase(nd.begin() + i);
                        auto ne = tours[e];
                        ne.insert(ne.begin() + pos, t);
                        if (tour_cost(inst, d, nd) + tour_cost(inst, e, ne) < before) {
                            tours[d] = std::move(nd);
                            tours[e] = std::move(ne);
                            improved = true;
                        }
                    }
                }
            }
        }
        for (int d = 0; d < k && !improved; ++d) {
            for (int e = d + 1; e < k && !improved; ++e) {
                for (size_t i = 0; i < tours[d].size() && !improved; ++i) {
                    for (size_t j = 0; j < tours[e].size() && !improved; ++j) {
                        int64_t before = tour_cost(inst, d, tours[d]) + tour_cost(inst, e, tours[e]);
                        auto nd = tours[d];
                        auto ne = tours[e];
                        std::swap(nd[i], ne[j]);
                        if (tour_cost(inst, d, nd) + tour_cost(inst, e, ne) < before) {
                            tours[d] = std::move(nd);
                            tours[e] = std::move(ne);
                            improved = true;
                        }
                    }
                }
            }
        }
        if (improved)
            for (int d = 0; d < k; ++d) two_opt(inst, d, tours[d]);
    }
    (void)total;

    std::vector<Cycle> cycles;
    for (int d = 0; d < k; ++d)
        if (!tours[d].empty()) cycles.push_back(Cycle{d, tours[d]});

    IntegerSolution sol;
    VariableMap vm{inst.num_targets, inst.num_depots};
    vectors_from_cycles(inst, vm, cycles, sol.x, sol.y);
    sol.cycles = std::move(cycles);
    sol.cost = solution_cost(inst, sol.cycles);

    auto verdict = check_feasible(inst, sol.x, sol.y);
    if (!std::holds_alternative<IntegerSolution>(verdict))
        throw ContractError("heuristic produced an infeasible solution: " +
                            std::get<FeasibilityViolation>(verdict).message);
    return sol;
}

std::optional<IntegerSolution> run_heuristic(const FractionalPoint& point, const Instance& inst) {
    // An integral feasible point is returned unchanged.
    bool integral = true;
    for (double v : point.x) integral = integral && std::fabs(v - std::llround(v)) <= kEpsInt;
    for (double v : point.y) integral = integral && std::fabs(v - std::llround(v)) <= kEpsInt;
    if (integral) {
        std::vector<int> x, y;
        for (double v : point.x) x.push_back(static_cast<int>(std::llround(v)));
        for (double v : point.y) y.push_back(static_cast<int>(std::llround(v)));
        auto verdict = check_feasible(inst, x, y);
        if (std::holds_alternative<IntegerSolution>(verdict))
            return std::get<IntegerSolution>(verdict);
    }
    return mdtsp_construct_improve(inst, round_selection(point, inst));
}

}  // namespace gmdtsp
