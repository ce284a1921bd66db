#include "gmdtsp/oracle.hpp"

#include <algorithm>
#include <limits>

namespace gmdtsp {

namespace {

constexpr int64_t kInfCost = std::numeric_limits<int64_t>::max() / 4;

struct CycleTable {
    int n = 0, k = 0;
    // hp[d][B][last]: cheapest path depot d -> exactly B -> last.
    std::vector<std::vector<int64_t>> hp;
    std::vector<int64_t> best_cycle;  // per subset, over depots and orders
    std::vector<int> best_depot;

    explicit CycleTable(const Instance& inst) {
        n = inst.num_targets;
        k = inst.num_depots;
        if (n > kOracleMaxTargets)
            throw ContractError("oracle: instance exceeds " + std::to_string(kOracleMaxTargets) +
                                " targets");
        const int full = 1 << n;
        hp.assign(k, std::vector<int64_t>(static_cast<size_t>(full) * n, kInfCost));
        best_cycle.assign(full, kInfCost);
        best_depot.assign(full, -1);

        for (int d = 0; d < k; ++d) {
            auto& h = hp[d];
            for (int t = 0; t < n; ++t) h[static_cast<size_t>(1 << t) * n + t] = inst.cost_dt(d, t);
            for (int B = 1; B < full; ++B) {
                for (int last = 0; last < n; ++last) {
                    if (!(B & (1 << last))) continue;
                    int64_t cur = h[static_cast<size_t>(B) * n + last];
                    if (cur >= kInfCost) continue;
                    for (int nxt = 0; nxt < n; ++nxt) {
                        if (B & (1 << nxt)) continue;
                        int64_t cand = cur + inst.cost_tt(last, nxt);
                        auto& slot = h[static_cast<size_t>(B | (1 << nxt)) * n + nxt];
                        slot = std::min(slot, cand);
                    }
                }
            }
            for (int B = 1; B < full; ++B) {
                for (int last = 0; last < n; ++last) {
                    if (!(B & (1 << last))) continue;
                    int64_t cur = h[static_cast<size_t>(B) * n + last];
                    if (cur >= kInfCost) continue;
                    int64_t cyc = cur + inst.cost_dt(d, last);
                    if (cyc < best_cycle[B]) {
                        best_cycle[B] = cyc;
                        best_depot[B] = d;
                    }
                }
            }
        }
    }

    // Reconstructs the visit order of the cheapest cycle over subset B.
    Cycle reconstruct(const Instance& inst, int B) const {
        int d = best_depot[B];
        const auto& h = hp[d];
        int last = -1;
        int64_t best = kInfCost;
        for (int t = 0; t < n; ++t) {
            if (!(B & (1 << t))) continue;
            int64_t v = h[static_cast<size_t>(B) * n + t];
            if (v >= kInfCost) continue;
            if (v + inst.cost_dt(d, t) < best) {
                best = v + inst.cost_dt(d, t);
                last = t;
            }
        }
        std::vector<int> rev;
        int cur = B;
        while (last >= 0) {
            rev.push_back(last);
            int prev_mask = cur & ~(1 << last);
            if (prev_mask == 0) break;
            int pick = -1;
            for (int t = 0; t < n; ++t) {
                if (!(prev_mask & (1 << t))) continue;
                if (h[static_cast<size_t>(prev_mask) * n + t] + inst.cost_tt(t, last) ==
                    h[static_cast<size_t>(cur) * n + last]) {
                    pick = t;
                    break;
                }
            }
            cur = prev_mask;
            last = pick;
        }
        std::reverse(rev.begin(), rev.end());
        return Cycle{d, rev};
    }
};

struct PartitionDp {
    std::vector<int64_t> f;      // cheapest exact partition of each subset
    std::vector<int> first_cut;  // the block containing the lowest bit

    explicit PartitionDp(const CycleTable& ct, int n) {
        const int full = 1 << n;
        f.assign(full, kInfCost);
        first_cut.assign(full, 0);
        f[0] = 0;
        for (int S = 1; S < full; ++S) {
            int low = S & (-S);
            for (int B = S; B; B = (B - 1) & S) {
                if (!(B & low)) continue;
                if (ct.best_cycle[B] >= kInfCost || f[S ^ B] >= kInfCost) continue;
                int64_t cand = ct.best_cycle[B] + f[S ^ B];
                if (cand < f[S]) {
                    f[S] = cand;
                    first_cut[S] = B;
                }
            }
        }
    }
};

std::vector<int> cluster_masks(const Instance& inst) {
    std::vector<int> masks;
    for (const auto& c : inst.clusters) {
        int m = 0;
        for (int t : c) m |= 1 << t;
        masks.push_back(m);
    }
    return masks;
}

int best_covering_subset(const Instance& inst, const PartitionDp& dp) {
    const int full = 1 << inst.num_targets;
    auto masks = cluster_masks(inst);
    int64_t best = kInfCost;
    int best_set = -1;
    for (int S = 1; S < full; ++S) {
        bool covering = true;
        for (int m : masks) covering = covering && (S & m);
        if (!covering || dp.f[S] >= best) continue;
        best = dp.f[S];
        best_set = S;
    }
    if (best_set < 0) throw ContractError("oracle: no feasible solution");
    return best_set;
}

}  // namespace

int64_t oracle_optimum(const Instance& inst) {
    CycleTable ct(inst);
    PartitionDp dp(ct, inst.num_targets);
    return dp.f[best_covering_subset(inst, dp)];
}

IntegerSolution oracle_solution(const Instance& inst) {
    CycleTable ct(inst);
    PartitionDp dp(ct, inst.num_targets);
    int S = best_covering_subset(inst, dp);

    std::vector<Cycle> cycles;
    for (int rem = S; rem;) {
        int B = dp.first_cut[rem];
        cycles.push_back(ct.reconstruct(inst, B));
        rem ^= B;
    }
    IntegerSolution sol;
    VariableMap vm{inst.num_targets, inst.num_depots};
    vectors_from_cycles(inst, vm, cycles, sol.x, sol.y);
    sol.cycles = std::move(cycles);
    sol.cost = solution_cost(inst, sol.cycles);
    return sol;
}

uint64_t enumerate_solutions(const Instance& inst,
                             const std::function<void(const IntegerSolution&)>& fn) {
    const int n = inst.num_targets, k = inst.num_depots;
    if (n > kOracleMaxTargets)
        throw ContractError("oracle: instance exceeds " + std::to_string(kOracleMaxTargets) +
                            " targets");
    const int full = 1 << n;
    auto masks = cluster_masks(inst);
    VariableMap vm{n, k};

    IntegerSolution sol;
    sol.x.assign(vm.num_edges(), 0);
    sol.y.assign(n, 0);
    uint64_t count = 0;

    auto apply_cycle = [&](const Cycle& c, int delta) {
        if (c.targets.size() == 1) {
            sol.x[vm.dt(c.depot, c.targets[0])] += 2 * delta;
        } else {
            sol.x[vm.dt(c.depot, c.targets.front())] += delta;
            sol.x[vm.dt(c.depot, c.targets.back())] += delta;
            for (size_t i = 0; i + 1 < c.targets.size(); ++i)
                sol.x[vm.tt(c.targets[i], c.targets[i + 1])] += delta;
        }
    };

    std::function<void(int)> rec = [&](int rem) {
        if (rem == 0) {
            sol.cost = solution_cost(inst, sol.cycles);
            ++count;
            fn(sol);
            return;
        }
        int low = rem & (-rem);
        for (int B = rem; B; B = (B - 1) & rem) {
            if (!(B & low)) continue;
            std::vector<int> members;
            for (int t = 0; t < n; ++t)
                if (B & (1 << t)) members.push_back(t);
            std::vector<int> perm = members;
            do {
                // A cycle and its reversal share an edge set; keep one.
                if (perm.size() >= 2 && perm.front() > perm.back()) continue;
                for (int d = 0; d < k; ++d) {
                    Cycle c{d, perm};
                    sol.cycles.push_back(c);
                    apply_cycle(c, 1);
                    rec(rem ^ B);
                    apply_cycle(c, -1);
                    sol.cycles.pop_back();
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    };

    for (int S = 1; S < full; ++S) {
        bool covering = true;
        for (int m : masks) covering = covering && (S & m);
        if (!covering) continue;
        for (int t = 0; t < n; ++t) sol.y[t] = (S >> t) & 1;
        rec(S);
    }
    return count;
}

}  // namespace gmdtsp
