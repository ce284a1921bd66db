#include "gmdtsp/preprocess.hpp"

namespace gmdtsp {

bool is_dominated(const Instance& inst, int i, int j) {
    if (!inst.triangle) throw ContractError("is_dominated: instance does not satisfy the triangle inequality");
    if (i == j) throw ContractError("is_dominated: identical targets");
    if (inst.cluster_of[i] != inst.cluster_of[j])
        throw ContractError("is_dominated: targets not in the same cluster");

    const int n = inst.num_targets, h = inst.cluster_of[i];
    std::vector<int> outside;
    for (int t = 0; t < n; ++t)
        if (inst.cluster_of[t] != h) outside.push_back(t);

    // (1) c_pi + c_iq >= c_pj + c_jq for p, q outside the cluster.
    for (int p : outside)
        for (int q : outside)
            if (inst.cost_tt(p, i) + inst.cost_tt(i, q) < inst.cost_tt(p, j) + inst.cost_tt(j, q))
                return false;
    // (2) c_di >= c_dj for every depot.
    for (int d = 0; d < inst.num_depots; ++d)
        if (inst.cost_dt(d, i) < inst.cost_dt(d, j)) return false;
    // (3) c_di + c_ip >= c_dj + c_jp.
    for (int d = 0; d < inst.num_depots; ++d)
        for (int p : outside)
            if (inst.cost_dt(d, i) + inst.cost_tt(i, p) < inst.cost_dt(d, j) + inst.cost_tt(j, p))
                return false;
    return true;
}

std::pair<Instance, ReductionLog> reduce(const Instance& inst) {
    ReductionLog log;
    log.original_size = inst.num_targets;
    log.reduced_size = inst.num_targets;
    if (!inst.triangle) return {inst, log};

    Instance cur = inst;
    for (;;) {
        int remove = -1, dominator = -1;
        for (int i = 0; i < cur.num_targets && remove < 0; ++i) {
            for (int j : cur.clusters[cur.cluster_of[i]]) {
                if (j == i) continue;
                if (!is_dominated(cur, i, j)) continue;
                // Mutual dominance keeps the lower id.
                if (is_dominated(cur, j, i) && j > i) continue;
                remove = i;
                dominator = j;
                break;
            }
        }
        if (remove < 0) break;
        log.removed.emplace_back(cur.target_id[remove], cur.target_id[dominator]);
        std::vector<char> keep(cur.num_targets, 1);
        keep[remove] = 0;
        cur = sub_instance(cur, keep);
    }
    log.reduced_size = cur.num_targets;
    return {cur, log};
}

}  // namespace gmdtsp
