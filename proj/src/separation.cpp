#include "gmdtsp/separation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include "gmdtsp/parallel.hpp"

namespace gmdtsp {

namespace {

struct Candidate {
    CutRow row;
    double violation;
};

// Keeps the most violated rows, deduplicated, in a deterministic order.
std::vector<CutRow> finalize(std::vector<Candidate> cands, int cap) {
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.violation > b.violation; });
    std::set<uint64_t> seen;
    std::vector<CutRow> out;
    for (auto& c : cands) {
        if (static_cast<int>(out.size()) >= cap) break;
        if (seen.insert(c.row.fingerprint()).second) out.push_back(std::move(c.row));
    }
    return out;
}

std::vector<int> source_targets(const SupportGraph& g, const std::vector<char>& side,
                                const Instance& inst) {
    std::vector<int> S;
    for (int v = 0; v < g.num_vertices(); ++v) {
        int iv = g.instance_vertex[v];
        if (side[v] && iv >= inst.num_depots) S.push_back(iv - inst.num_depots);
    }
    std::sort(S.begin(), S.end());
    return S;
}

std::vector<char> target_mask(const std::vector<int>& targets, int n) {
    std::vector<char> mask(n, 0);
    for (int t : targets) mask[t] = 1;
    return mask;
}

// D' maximizing x(D':{j}) + x({k}:D\D'), clamped to a nonempty proper subset;
// membership ties include the depot (printed >=), clamps pick the lowest id.
std::vector<char> best_dprime(const FractionalPoint& point, const VariableMap& vm, int j, int k) {
    std::vector<char> dprime(vm.k, 0);
    int size = 0;
    for (int d = 0; d < vm.k; ++d)
        if (point.x[vm.dt(d, j)] >= point.x[vm.dt(d, k)]) {
            dprime[d] = 1;
            ++size;
        }
    auto delta = [&](int d) { return point.x[vm.dt(d, j)] - point.x[vm.dt(d, k)]; };
    if (size == 0) {
        int best = 0;
        for (int d = 1; d < vm.k; ++d)
            if (delta(d) > delta(best)) best = d;
        dprime[best] = 1;
    } else if (size == vm.k) {
        int worst = 0;
        for (int d = 1; d < vm.k; ++d)
            if (delta(d) < delta(worst)) worst = d;
        dprime[worst] = 0;
    }
    return dprime;
}

double dprime_load(const FractionalPoint& point, const VariableMap& vm, int j, int k,
                   const std::vector<char>& dprime) {
    double load = 0.0;
    for (int d = 0; d < vm.k; ++d)
        load += dprime[d] ? point.x[vm.dt(d, j)] : point.x[vm.dt(d, k)];
    return load;
}

}  // namespace

CutRow make_gsec_row(const VariableMap& vm, const std::vector<int>& targets, int anchor) {
    std::vector<char> in(vm.n, 0);
    for (int t : targets) in[t] = 1;
    std::vector<std::pair<int, double>> coeffs;
    for (int t : targets) {
        for (int u = 0; u < vm.n; ++u)
            if (!in[u]) coeffs.emplace_back(vm.tt(t, u), 1.0);
        for (int d = 0; d < vm.k; ++d) coeffs.emplace_back(vm.dt(d, t), 1.0);
    }
    if (anchor < 0) return CutRow::make(std::move(coeffs), RowSense::Ge, 2.0, CutClass::Sec1);
    coeffs.emplace_back(vm.yv(anchor), -2.0);
    return CutRow::make(std::move(coeffs), RowSense::Ge, 0.0, CutClass::Sec2);
}

CutRow make_4path_row(const VariableMap& vm, int j, int k, const std::vector<char>& dprime) {
    std::vector<std::pair<int, double>> coeffs;
    for (int d = 0; d < vm.k; ++d) {
        if (dprime[d])
            coeffs.emplace_back(vm.dt(d, j), 1.0);
        else
            coeffs.emplace_back(vm.dt(d, k), 1.0);
    }
    coeffs.emplace_back(vm.tt(j, k), 3.0);
    coeffs.emplace_back(vm.yv(j), -2.0);
    coeffs.emplace_back(vm.yv(k), -2.0);
    return CutRow::make(std::move(coeffs), RowSense::Le, 0.0, CutClass::Pec4);
}

CutRow make_pec_row(const VariableMap& vm, const std::vector<int>& sbar, int j, int k,
                    const std::vector<char>& dprime, int anchor) {
    std::vector<char> in(vm.n, 0);
    for (int t : sbar) in[t] = 1;
    std::vector<std::pair<int, double>> coeffs;
    for (int t : sbar) {
        for (int u = 0; u < vm.n; ++u)
            if (!in[u]) coeffs.emplace_back(vm.tt(t, u), 1.0);
        for (int d = 0; d < vm.k; ++d) coeffs.emplace_back(vm.dt(d, t), 1.0);
    }
    for (int d = 0; d < vm.k; ++d) {
        if (dprime[d])
            coeffs.emplace_back(vm.dt(d, j), -1.0);
        else
            coeffs.emplace_back(vm.dt(d, k), -1.0);
    }
    if (anchor < 0) return CutRow::make(std::move(coeffs), RowSense::Ge, 1.0, CutClass::Pec);
    coeffs.emplace_back(vm.yv(anchor), -1.0);
    return CutRow::make(std::move(coeffs), RowSense::Ge, 0.0, CutClass::Pec);
}

CutRow make_comb_row(const VariableMap& vm, const Instance& inst, const Comb& comb) {
    MuCache mu(inst);
    std::vector<char> in_handle(vm.n, 0);
    for (int t : comb.handle) in_handle[t] = 1;
    std::vector<char> in_tooth(vm.n, 0);

    std::vector<std::pair<int, double>> coeffs;
    for (size_t a = 0; a < comb.handle.size(); ++a)
        for (size_t b = a + 1; b < comb.handle.size(); ++b)
            coeffs.emplace_back(vm.tt(comb.handle[a], comb.handle[b]), 1.0);

    std::vector<double> beta(vm.n, 0.0);
    int size_sum = 0;
    for (const auto& tooth : comb.teeth) {
        size_sum += static_cast<int>(tooth.size());
        for (size_t a = 0; a < tooth.size(); ++a)
            for (size_t b = a + 1; b < tooth.size(); ++b)
                coeffs.emplace_back(vm.tt(tooth[a], tooth[b]), 1.0);

        std::vector<int> inside, outside;
        for (int t : tooth) {
            in_tooth[t] = 1;
            (in_handle[t] ? inside : outside).push_back(t);
        }
        std::sort(inside.begin(), inside.end());
        std::sort(outside.begin(), outside.end());
        int a_i = mu.mu(target_mask(inside, vm.n)) == 0 ? inside.front() : -1;
        int b_i = mu.mu(target_mask(outside, vm.n)) == 0 ? outside.front() : -1;
        for (int t : inside) beta[t] = (t == a_i) ? 1.0 : 2.0;
        for (int t : outside) beta[t] = (t == b_i) ? 0.0 : 1.0;
    }
    for (int t : comb.handle)
        if (!in_tooth[t]) beta[t] = 1.0;

    int tcount = static_cast<int>(comb.teeth.size());
    double sigma = static_cast<double>(comb.handle.size()) + size_sum - (3.0 * tcount + 1.0) / 2.0;
    double beta_sum = 0.0;
    for (int t = 0; t < vm.n; ++t)
        if (beta[t] != 0.0) {
            coeffs.emplace_back(vm.yv(t), -beta[t]);
            beta_sum += beta[t];
        }
    return CutRow::make(std::move(coeffs), RowSense::Le, sigma - beta_sum, CutClass::Comb);
}

CutRow make_tcomb_row(const VariableMap& vm, const std::vector<int>& handle,
                      const std::vector<std::pair<int, int>>& teeth, int abar) {
    std::vector<char> tooth_target(vm.n, 0);
    for (const auto& [d, v] : teeth) tooth_target[v] = 1;

    std::vector<std::pair<int, double>> coeffs;
    for (size_t a = 0; a < handle.size(); ++a)
        for (size_t b = a + 1; b < handle.size(); ++b)
            coeffs.emplace_back(vm.tt(handle[a], handle[b]), 1.0);
    for (const auto& [d, v] : teeth) coeffs.emplace_back(vm.dt(d, v), 1.0);

    int tcount = static_cast<int>(teeth.size());
    if (abar < 0) {
        // |H \ teeth| = 1 variant: rhs is sum of 2 y over the tooth targets.
        for (const auto& [d, v] : teeth) coeffs.emplace_back(vm.yv(v), -2.0);
        return CutRow::make(std::move(coeffs), RowSense::Le, 0.0, CutClass::Tcomb);
    }
    double beta_sum = 0.0;
    for (int t : handle) {
        double b = 0.0;
        if (tooth_target[t])
            b = 2.0;
        else if (t != abar)
            b = 1.0;
        if (b != 0.0) {
            coeffs.emplace_back(vm.yv(t), -b);
            beta_sum += b;
        }
    }
    double rhs = static_cast<double>(handle.size()) + tcount - 1.0 - beta_sum;
    return CutRow::make(std::move(coeffs), RowSense::Le, rhs, CutClass::Tcomb);
}

std::vector<CutRow> separate_gsec_cluster(const FractionalPoint& point, const Instance& inst,
                                          const VariableMap& vm, const SeparationConfig& cfg) {
    SupportBuild sb = build_support(point, inst, vm);
    const int m = inst.num_clusters();
    std::vector<std::vector<Candidate>> slots(m);

    parallel_for(m, cfg.threads, [&](int h) {
        SupportGraph g = sb.graph;
        int s = g.add_vertex();
        int t = g.add_vertex();
        bool any = false;
        for (int tgt : inst.clusters[h]) {
            int gv = sb.graph_of[inst.num_depots + tgt];
            if (gv >= 0) {
                g.add_edge(s, gv, kBigCapacity);
                any = true;
            }
        }
        if (!any) return;
        for (int d = 0; d < inst.num_depots; ++d) g.add_edge(sb.graph_of[d], t, kBigCapacity);

        MinCutResult mc = max_flow_min_cut(g, s, t);
        if (mc.value < 2.0 - cfg.eps_cut) {
            std::vector<int> S = source_targets(g, mc.source_side, inst);
            for (int tgt : inst.clusters[h])  // validity needs the full cluster in S
                if (point.y[tgt] <= kSupportEps) S.push_back(tgt);
            std::sort(S.begin(), S.end());
            S.erase(std::unique(S.begin(), S.end()), S.end());
            CutRow row = make_gsec_row(vm, S, -1);
            double viol = -evaluate_row(row, point, vm);
            if (viol > cfg.eps_cut) slots[h].push_back({std::move(row), viol});
        }
    });

    std::vector<Candidate> cands;
    for (auto& s : slots)
        for (auto& c : s) cands.push_back(std::move(c));
    return finalize(std::move(cands), cfg.max_cuts_per_class);
}

std::vector<CutRow> separate_gsec_target(const FractionalPoint& point, const Instance& inst,
                                         const VariableMap& vm, const SeparationConfig& cfg) {
    SupportBuild sb = build_support(point, inst, vm);
    MuCache mu(inst);
    std::vector<std::vector<Candidate>> slots(vm.n);

    parallel_for(vm.n, cfg.threads, [&](int i) {
        if (point.y[i] <= kSupportEps) return;
        SupportGraph g = sb.graph;
        int s = sb.graph_of[inst.num_depots + i];
        int t = g.add_vertex();
        for (int d = 0; d < inst.num_depots; ++d) g.add_edge(sb.graph_of[d], t, kBigCapacity);

        MinCutResult mc = max_flow_min_cut(g, s, t);
        if (mc.value < 2.0 * point.y[i] - cfg.eps_cut) {
            std::vector<int> S = source_targets(g, mc.source_side, inst);
            // Reject the non-facet form in favour of its dominating row.
            CutRow row = mu.mu(target_mask(S, vm.n)) != 0 ? make_gsec_row(vm, S, -1)
                                                          : make_gsec_row(vm, S, i);
            double viol = -evaluate_row(row, point, vm);
            if (viol > cfg.eps_cut) slots[i].push_back({std::move(row), viol});
        }
    });

    std::vector<Candidate> cands;
    for (auto& s : slots)
        for (auto& c : s) cands.push_back(std::move(c));
    return finalize(std::move(cands), cfg.max_cuts_per_class);
}

std::vector<CutRow> separate_4path(const FractionalPoint& point, const Instance& inst,
                                   const VariableMap& vm, const SeparationConfig& cfg) {
    std::vector<Candidate> cands;
    for (int j = 0; j < vm.n; ++j) {
        if (point.y[j] <= kSupportEps) continue;
        for (int k = j + 1; k < vm.n; ++k) {
            if (point.y[k] <= kSupportEps) continue;
            std::vector<char> dprime(vm.k, 0);
            int size = 0;
            for (int d = 0; d < vm.k; ++d)
                if (point.x[vm.dt(d, j)] >= point.x[vm.dt(d, k)]) {
                    dprime[d] = 1;
                    ++size;
                }
            if (size == 0 || size == vm.k) continue;  // no violated member (Sec. 4.2)
            double lhs = dprime_load(point, vm, j, k, dprime) + 3.0 * point.x[vm.tt(j, k)];
            double rhs = 2.0 * (point.y[j] + point.y[k]);
            if (lhs > rhs + cfg.eps_cut)
                cands.push_back({make_4path_row(vm, j, k, dprime), lhs - rhs});
        }
    }
    return finalize(std::move(cands), cfg.max_cuts_per_class);
}

std::vector<CutRow> separate_gpec(const FractionalPoint& point, const Instance& inst,
                                  const VariableMap& vm, const SeparationConfig& cfg) {
    if (inst.num_depots < 2) return {};
    SupportBuild sb = build_support(point, inst, vm);
    MuCache mu(inst);

    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < vm.n; ++j) {
        if (point.y[j] <= kSupportEps) continue;
        for (int k = j + 1; k < vm.n; ++k)
            if (point.y[k] > kSupportEps) pairs.emplace_back(j, k);
    }

    std::vector<std::vector<Candidate>> slots(pairs.size());
    parallel_for(static_cast<int>(pairs.size()), cfg.threads, [&](int pi) {
        auto [j, k] = pairs[pi];
        std::vector<char> dprime = best_dprime(point, vm, j, k);
        double load = dprime_load(point, vm, j, k, dprime);

        auto run_cut = [&](const std::vector<int>& forced_targets, double threshold)
            -> std::pair<double, std::vector<int>> {
            SupportGraph g = sb.graph;
            int s = g.add_vertex();
            int t = g.add_vertex();
            for (int tgt : forced_targets) {
                int gv = sb.graph_of[inst.num_depots + tgt];
                if (gv >= 0) g.add_edge(s, gv, kBigCapacity);
            }
            for (int d = 0; d < inst.num_depots; ++d) g.add_edge(sb.graph_of[d], t, kBigCapacity);
            MinCutResult mc = max_flow_min_cut(g, s, t);
            if (mc.value < threshold) return {mc.value, source_targets(g, mc.source_side, inst)};
            return {mc.value, {}};
        };

        // Eq. 19 search: one forced cluster per run.
        for (int h = 0; h < inst.num_clusters(); ++h) {
            bool disjoint = true;
            for (int tgt : inst.clusters[h]) disjoint = disjoint && tgt != j && tgt != k;
            if (!disjoint) continue;
            std::vector<int> forced = inst.clusters[h];
            forced.push_back(j);
            forced.push_back(k);
            auto [value, side] = run_cut(forced, load + 1.0 - cfg.eps_cut);
            if (side.empty()) continue;
            std::vector<int> sbar = side;
            for (int tgt : inst.clusters[h])  // validity needs the full cluster
                if (point.y[tgt] <= kSupportEps) sbar.push_back(tgt);
            std::sort(sbar.begin(), sbar.end());
            sbar.erase(std::unique(sbar.begin(), sbar.end()), sbar.end());
            if (sbar.size() <= 2) continue;  // S must be nonempty
            CutRow row = make_pec_row(vm, sbar, j, k, dprime, -1);
            double viol = -evaluate_row(row, point, vm);
            if (viol > cfg.eps_cut) slots[pi].push_back({std::move(row), viol});
        }

        // Eq. 18 search: one forced third target per run.
        for (int i = 0; i < vm.n; ++i) {
            if (i == j || i == k || point.y[i] <= kSupportEps) continue;
            auto [value, side] = run_cut({i, j, k}, load + point.y[i] - cfg.eps_cut);
            if (side.empty()) continue;
            const std::vector<int>& sbar = side;
            if (sbar.size() <= 2) continue;
            std::vector<char> smask = target_mask(sbar, vm.n);
            smask[j] = smask[k] = 0;
            // Reject the non-facet form in favour of its dominating row.
            CutRow row = mu.mu(smask) != 0 ? make_pec_row(vm, sbar, j, k, dprime, -1)
                                           : make_pec_row(vm, sbar, j, k, dprime, i);
            double viol = -evaluate_row(row, point, vm);
            if (viol > cfg.eps_cut) slots[pi].push_back({std::move(row), viol});
        }
    });

    std::vector<Candidate> cands;
    for (auto& s : slots)
        for (auto& c : s) cands.push_back(std::move(c));
    return finalize(std::move(cands), cfg.max_cuts_per_class);
}

std::vector<CutRow> separate_2matching_and_comb(const FractionalPoint& point, const Instance& inst,
                                                const VariableMap& vm,
                                                const SeparationConfig& cfg) {
    std::vector<Candidate> cands;
    const double one = 1.0 - cfg.eps_cut;

    auto try_comb = [&](Comb&& comb) {
        if (comb.teeth.size() < 3 || comb.teeth.size() % 2 == 0) return;
        std::vector<char> used(vm.n, 0);
        for (const auto& tooth : comb.teeth)
            for (int t : tooth) {
                if (used[t]) return;  // teeth must be pairwise disjoint
                used[t] = 1;
            }
        CutRow row = make_comb_row(vm, inst, comb);
        double viol = -evaluate_row(row, point, vm);
        if (viol > cfg.eps_cut) cands.push_back({std::move(row), viol});
    };

    // Pass 1: 2-matching heuristic on the fractional target-target graph.
    {
        std::vector<int> comp(vm.n, -1);
        std::vector<std::vector<int>> adj(vm.n);
        for (int a = 0; a < vm.n; ++a)
            for (int b = a + 1; b < vm.n; ++b) {
                double x = point.x[vm.tt(a, b)];
                if (x > kSupportEps && x < one) {
                    adj[a].push_back(b);
                    adj[b].push_back(a);
                }
            }
        int ncomp = 0;
        for (int v = 0; v < vm.n; ++v) {
            if (comp[v] >= 0 || point.y[v] <= kSupportEps) continue;
            std::vector<int> stack{v};
            comp[v] = ncomp;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (int w : adj[u])
                    if (comp[w] < 0) {
                        comp[w] = ncomp;
                        stack.push_back(w);
                    }
            }
            ++ncomp;
        }
        std::vector<std::vector<int>> handles(ncomp);
        for (int v = 0; v < vm.n; ++v)
            if (comp[v] >= 0) handles[comp[v]].push_back(v);

        for (auto& handle : handles) {
            std::vector<char> in(vm.n, 0);
            for (int t : handle) in[t] = 1;
            Comb comb;
            comb.kind = Comb::comb;
            comb.handle = handle;
            for (int u : handle)
                for (int w = 0; w < vm.n; ++w) {
                    if (in[w] || w == u) continue;
                    if (point.x[vm.tt(u, w)] >= one) comb.teeth.push_back({std::min(u, w), std::max(u, w)});
                }
            // Unit edges into depots cannot form target-comb teeth; skipped.
            std::sort(comb.teeth.begin(), comb.teeth.end());
            comb.teeth.erase(std::unique(comb.teeth.begin(), comb.teeth.end()), comb.teeth.end());
            try_comb(std::move(comb));
        }
    }

    // Pass 2: same procedure with every cluster shrunk to a supernode.
    {
        const int m = inst.num_clusters();
        std::vector<std::vector<double>> xbar(m, std::vector<double>(m, 0.0));
        for (int a = 0; a < vm.n; ++a)
            for (int b = a + 1; b < vm.n; ++b) {
                double x = point.x[vm.tt(a, b)];
                if (x <= kSupportEps) continue;
                int ha = inst.cluster_of[a], hb = inst.cluster_of[b];
                if (ha == hb) continue;  // intra-cluster edges vanish
                xbar[ha][hb] += x;
                xbar[hb][ha] += x;
            }
        std::vector<int> comp(m, -1);
        int ncomp = 0;
        for (int h = 0; h < m; ++h) {
            if (comp[h] >= 0) continue;
            std::vector<int> stack{h};
            comp[h] = ncomp;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (int w = 0; w < m; ++w)
                    if (comp[w] < 0 && xbar[u][w] > kSupportEps && xbar[u][w] < one) {
                        comp[w] = ncomp;
                        stack.push_back(w);
                    }
            }
            ++ncomp;
        }
        std::vector<std::vector<int>> groups(ncomp);
        for (int h = 0; h < m; ++h) groups[comp[h]].push_back(h);

        for (const auto& group : groups) {
            std::vector<char> in(m, 0);
            for (int h : group) in[h] = 1;
            Comb comb;
            comb.kind = Comb::comb;
            for (int h : group)
                for (int t : inst.clusters[h]) comb.handle.push_back(t);
            std::sort(comb.handle.begin(), comb.handle.end());
            std::set<std::pair<int, int>> tooth_edges;
            for (int h : group)
                for (int q = 0; q < m; ++q)
                    if (!in[q] && xbar[h][q] >= one) tooth_edges.insert({h, q});
            for (const auto& [h, q] : tooth_edges) {
                std::vector<int> tooth = inst.clusters[h];
                tooth.insert(tooth.end(), inst.clusters[q].begin(), inst.clusters[q].end());
                std::sort(tooth.begin(), tooth.end());
                comb.teeth.push_back(std::move(tooth));
            }
            try_comb(std::move(comb));
        }
    }
    return finalize(std::move(cands), cfg.max_cuts_per_class);
}

std::vector<CutRow> separate_tcomb(const FractionalPoint& point, const Instance& inst,
                                   const VariableMap& vm, const SeparationConfig& cfg) {
    if (inst.num_depots < 2) return {};  // t >= 2 unreachable with one depot
    SupportBuild sb = build_support(point, inst, vm);
    const SupportGraph& g = sb.graph;

    // Connected components of the support graph.
    std::vector<int> comp(g.num_vertices(), -1);
    {
        std::vector<std::vector<int>> adj(g.num_vertices());
        for (const auto& e : g.edges) {
            adj[e.u].push_back(e.v);
            adj[e.v].push_back(e.u);
        }
        int ncomp = 0;
        for (int v = 0; v < g.num_vertices(); ++v) {
            if (comp[v] >= 0) continue;
            std::vector<int> stack{v};
            comp[v] = ncomp;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (int w : adj[u])
                    if (comp[w] < 0) {
                        comp[w] = ncomp;
                        stack.push_back(w);
                    }
            }
            ++ncomp;
        }
    }

    std::vector<double> degree(g.num_vertices(), 0.0);
    for (const auto& e : g.edges) {
        degree[e.u] += e.cap;
        degree[e.v] += e.cap;
    }
    auto x_between = [&](int gu, int gv) {
        int iu = g.instance_vertex[gu], iv = g.instance_vertex[gv];
        if (iu > iv) std::swap(iu, iv);
        // iu depot, iv target (the only pairs queried here)
        return point.x[vm.dt(iu, iv - inst.num_depots)];
    };

    // One tooth per depot: the target minimizing x(delta({d, v})).
    struct Tooth {
        int depot, target, comp;
    };
    std::vector<Tooth> teeth;
    for (int d = 0; d < inst.num_depots; ++d) {
        int gd = sb.graph_of[d];
        int best = -1;
        double best_val = 0.0;
        for (int t = 0; t < vm.n; ++t) {
            int gt = sb.graph_of[inst.num_depots + t];
            if (gt < 0) continue;
            double val = degree[gd] + degree[gt] - 2.0 * x_between(gd, gt);
            if (best < 0 || val < best_val - 1e-12) {
                best = t;
                best_val = val;
            }
        }
        if (best >= 0 && comp[gd] == comp[sb.graph_of[inst.num_depots + best]])
            teeth.push_back({d, best, comp[gd]});
    }

    std::vector<Candidate> cands;
    const int nt = static_cast<int>(teeth.size());
    for (int mask = 1; mask < (1 << nt); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) < 2) continue;
        std::vector<Tooth> sel;
        for (int i = 0; i < nt; ++i)
            if (mask & (1 << i)) sel.push_back(teeth[i]);
        bool ok = true;
        for (size_t a = 0; a < sel.size() && ok; ++a) {
            ok = ok && sel[a].comp == sel[0].comp;
            for (size_t b = a + 1; b < sel.size() && ok; ++b)
                ok = ok && sel[a].target != sel[b].target;
        }
        if (!ok) continue;

        std::vector<int> comp_targets;
        for (int t = 0; t < vm.n; ++t) {
            int gt = sb.graph_of[inst.num_depots + t];
            if (gt >= 0 && comp[gt] == sel[0].comp) comp_targets.push_back(t);
        }
        std::vector<char> is_tooth_target(vm.n, 0);
        for (const auto& th : sel) is_tooth_target[th.target] = 1;
        std::vector<int> removable;
        for (int t : comp_targets)
            if (!is_tooth_target[t]) removable.push_back(t);
        if (removable.empty()) continue;  // teeth must not absorb the component
        std::stable_sort(removable.begin(), removable.end(), [&](int a, int b) {
            if (point.y[a] != point.y[b]) return point.y[a] < point.y[b];
            return a < b;
        });

        std::vector<char> in_handle(vm.n, 0);
        for (int t : comp_targets) in_handle[t] = 1;
        std::vector<std::pair<int, int>> pairs;
        for (const auto& th : sel) pairs.emplace_back(th.depot, th.target);

        for (size_t q = 0; q + 1 <= removable.size(); ++q) {
            in_handle[removable[q]] = 0;
            size_t rem = removable.size() - q - 1;
            if (rem == 0) break;
            std::vector<int> handle;
            for (int t = 0; t < vm.n; ++t)
                if (in_handle[t]) handle.push_back(t);
            if (static_cast<int>(handle.size()) >= vm.n) continue;  // H must be proper
            CutRow row;
            if (rem > 1) {
                int abar = -1;
                for (size_t r = q + 1; r < removable.size(); ++r)
                    abar = abar < 0 ? removable[r] : std::min(abar, removable[r]);
                row = make_tcomb_row(vm, handle, pairs, abar);
            } else {
                row = make_tcomb_row(vm, handle, pairs, -1);
            }
            double viol = -evaluate_row(row, point, vm);
            if (viol > cfg.eps_cut) cands.push_back({std::move(row), viol});
        }
    }
    return finalize(std::move(cands), cfg.max_cuts_per_class);
}

}  // namespace gmdtsp
