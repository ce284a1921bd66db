#include "gmdtsp/bnc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>

#include "gmdtsp/heuristic.hpp"
#include "gmdtsp/parallel.hpp"

namespace gmdtsp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct PoolCut {
    CutRow row;
    int64_t id;
    int stale = 0;  // consecutive solves with slack > 0.5
};

// Basis token keyed by stable row ids so pool purges do not shift statuses.
struct NodeBasis {
    std::vector<VarStatus> structural;
    std::vector<std::pair<int64_t, VarStatus>> rows;
    bool empty() const { return structural.empty(); }
};

struct Node {
    std::vector<std::tuple<int, double, double>> fixings;  // (col, lo, hi)
    double bound;
    int depth;
    int64_t seq;
    NodeBasis basis;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
        return a.seq > b.seq;                              // then oldest first
    }
};

struct Solver {
    const SolverConfig& cfg;
    Instance work;
    ReductionLog reduction;
    BaseLp base;
    SeparationConfig sepcfg;

    std::vector<PoolCut> pool;
    std::set<uint64_t> pool_fps;
    int64_t next_row_id;

    std::optional<IntegerSolution> incumbent;
    int64_t ub = -1;

    SolverStats stats;
    std::vector<CutRow> emitted;
    Clock::time_point t0;
    bool timed_out = false;

    std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
    int64_t next_seq = 0;

    Solver(const Instance& inst, const SolverConfig& config) : cfg(config) {
        auto reduced = cfg.preprocess ? reduce(inst) : std::make_pair(inst, ReductionLog{});
        work = std::move(reduced.first);
        reduction = std::move(reduced.second);
        if (!cfg.preprocess) {
            reduction.original_size = inst.num_targets;
            reduction.reduced_size = inst.num_targets;
        }
        base = build_base_lp(work);
        next_row_id = static_cast<int64_t>(base.rows.size());
        sepcfg.eps_cut = cfg.eps_cut;
        sepcfg.max_cuts_per_class = cfg.max_cuts_per_class;
        sepcfg.threads = resolve_threads(cfg.threads);
    }

    bool time_exceeded() const { return seconds_since(t0) >= cfg.time_limit_s; }

    double fathom_eps() const { return 1e-6 * std::max(1.0, std::fabs(static_cast<double>(ub))); }

    // A node whose bound reaches UB - 1 (integral costs) cannot improve.
    bool improvable(double bound) const {
        if (!incumbent) return true;
        return bound < static_cast<double>(ub) - 1.0 + fathom_eps();
    }

    void offer_incumbent(const IntegerSolution& sol) {
        if (!incumbent || sol.cost < ub) {
            incumbent = sol;
            ub = sol.cost;
        }
    }

    LpProblem assemble(const Node& node) const {
        LpProblem p;
        p.objective = base.objective;
        p.lower = base.lower;
        p.upper = base.upper;
        for (const auto& [col, lo, hi] : node.fixings) {
            p.lower[col] = std::max(p.lower[col], lo);
            p.upper[col] = std::min(p.upper[col], hi);
        }
        p.rows = base.rows;
        for (const auto& pc : pool) p.rows.push_back(pc.row);
        return p;
    }

    LpBasis positional_basis(const NodeBasis& nb, const LpProblem& p) const {
        LpBasis b;
        b.cols.assign(p.num_vars() + p.num_rows(), VarStatus::AtLower);
        for (int j = 0; j < p.num_vars() && j < static_cast<int>(nb.structural.size()); ++j)
            b.cols[j] = nb.structural[j];
        std::vector<std::pair<int64_t, VarStatus>> sorted = nb.rows;
        std::sort(sorted.begin(), sorted.end());
        auto status_of = [&](int64_t id) -> VarStatus {
            auto it = std::lower_bound(sorted.begin(), sorted.end(),
                                       std::make_pair(id, VarStatus::AtLower));
            if (it != sorted.end() && it->first == id) return it->second;
            return VarStatus::Basic;  // rows added since the basis was saved
        };
        int nbase = static_cast<int>(base.rows.size());
        for (int i = 0; i < p.num_rows(); ++i) {
            int64_t id = i < nbase ? i : pool[i - nbase].id;
            b.cols[p.num_vars() + i] = status_of(id);
        }
        return b;
    }

    NodeBasis keyed_basis(const LpBasis& b, const LpProblem& p) const {
        NodeBasis nb;
        nb.structural.assign(b.cols.begin(), b.cols.begin() + p.num_vars());
        int nbase = static_cast<int>(base.rows.size());
        for (int i = 0; i < p.num_rows(); ++i) {
            int64_t id = i < nbase ? i : pool[i - nbase].id;
            nb.rows.emplace_back(id, b.cols[p.num_vars() + i]);
        }
        return nb;
    }

    FractionalPoint extract_point(const LpResult& res) const {
        FractionalPoint pt;
        const VariableMap& vm = base.vmap;
        pt.x.assign(res.primal.begin(), res.primal.begin() + vm.num_edges());
        pt.y.assign(res.primal.begin() + vm.num_edges(), res.primal.begin() + vm.num_vars());
        return pt;
    }

    int64_t count_class(CutClass cls) {
        switch (cls) {
            case CutClass::Sec1: return ++stats.sec1;
            case CutClass::Sec2: return ++stats.sec2;
            case CutClass::Pec4: return ++stats.pec4;
            case CutClass::Pec: return ++stats.pec;
            case CutClass::Comb: return ++stats.comb;
            case CutClass::Tcomb: return ++stats.tcomb;
            default: return 0;
        }
    }

    int add_cuts(const std::vector<CutRow>& cuts, bool lazy) {
        int added = 0;
        for (const auto& row : cuts) {
            uint64_t fp = row.fingerprint();
            if (!pool_fps.insert(fp).second) continue;
            pool.push_back({row, next_row_id++, 0});
            count_class(row.cls);
            if (lazy) ++stats.lazy;
            if (cfg.collect_cuts) emitted.push_back(row);
            ++added;
        }
        return added;
    }

    void update_pool_staleness(const FractionalPoint& pt) {
        std::vector<PoolCut> kept;
        kept.reserve(pool.size());
        for (auto& pc : pool) {
            double slack = evaluate_row(pc.row, pt, base.vmap);
            pc.stale = slack > 0.5 ? pc.stale + 1 : 0;
            if (pc.stale >= 50)
                pool_fps.erase(pc.row.fingerprint());
            else
                kept.push_back(std::move(pc));
        }
        pool = std::move(kept);
    }

    struct LoopResult {
        bool fathomed = true;
        double bound = 0.0;
        FractionalPoint point;
        NodeBasis basis;
    };

    void maybe_run_heuristic(const FractionalPoint& pt) {
        ++stats.heuristic_calls;
        auto sol = run_heuristic(pt, work);
        if (sol) {
            if (stats.root_ub < 0 || sol->cost < stats.root_ub) stats.root_ub = sol->cost;
            offer_incumbent(*sol);
        }
    }

    LoopResult cut_loop(Node& node) {
        LoopResult out;
        const bool is_root = node.seq == 0;
        bool retried_cold = false;
        NodeBasis basis = node.basis;

        for (int iter = 0;; ++iter) {
            if (time_exceeded()) {
                timed_out = true;
                return out;
            }
            LpProblem p = assemble(node);
            LpBasis warm = positional_basis(basis, p);
            LpResult res = lp_solve(p, basis.empty() && iter == 0 ? nullptr : &warm);
            ++stats.lp_solves;
            stats.lp_pivots += res.pivots;

            if (res.status == LpStatus::IterationLimit) {
                if (retried_cold)
                    throw ContractError("lp iteration limit persisted after cold restart");
                retried_cold = true;
                basis = NodeBasis{};
                continue;
            }
            if (res.status == LpStatus::Infeasible) return out;

            basis = keyed_basis(res.basis, p);
            FractionalPoint pt = extract_point(res);
            update_pool_staleness(pt);
            double value = res.objective_value;
            if (is_root && iter == 0) stats.base_lb = value;
            if (is_root) stats.root_lb = value;

            if (is_root && cfg.heuristic_period > 0 && iter % cfg.heuristic_period == 0)
                maybe_run_heuristic(pt);

            if (!improvable(value)) return out;

            bool integral = true;
            for (double v : pt.x) integral = integral && std::fabs(v - std::llround(v)) <= cfg.eps_int;
            for (double v : pt.y) integral = integral && std::fabs(v - std::llround(v)) <= cfg.eps_int;
            if (integral) {
                LazyCheck lc = integrality_and_lazy_check(work, base.vmap, pt);
                if (lc.numerical_trouble) {
                    if (retried_cold) throw ContractError("integral rounding kept failing");
                    retried_cold = true;
                    basis = NodeBasis{};
                    continue;
                }
                if (lc.solution) {
                    offer_incumbent(*lc.solution);
                    return out;  // bound equals the solution cost; fathomed
                }
                add_cuts(lc.cuts, true);
                continue;
            }

            // Separation, one family step per round in the fixed order.
            int added = 0;
            auto timed = [&](double& timer, auto&& fn) {
                auto t = Clock::now();
                std::vector<CutRow> cuts = fn();
                double el = std::chrono::duration<double>(Clock::now() - t).count();
                timer += el;
                stats.sep_s += el;
                return cuts;
            };
            auto add_fresh = [&](std::vector<CutRow> cuts) {
                std::vector<CutRow> fresh;
                for (auto& c : cuts)
                    if (!pool_fps.count(c.fingerprint())) fresh.push_back(std::move(c));
                added += add_cuts(fresh, false);
            };
            auto step_wanted = [&] { return added == 0 || cfg.all_families_per_round; };

            if (cfg.sec1 && step_wanted())
                add_fresh(timed(stats.sec_s,
                                [&] { return separate_gsec_cluster(pt, work, base.vmap, sepcfg); }));
            if (cfg.sec2 && step_wanted())
                add_fresh(timed(stats.sec_s,
                                [&] { return separate_gsec_target(pt, work, base.vmap, sepcfg); }));
            if ((cfg.pec4 || cfg.pec) && step_wanted()) {
                // Eq. 5 and the GPEC families form one step of the order.
                std::vector<CutRow> cuts;
                if (cfg.pec4)
                    cuts = timed(stats.pec4_s,
                                 [&] { return separate_4path(pt, work, base.vmap, sepcfg); });
                if (cfg.pec) {
                    auto more =
                        timed(stats.pec_s, [&] { return separate_gpec(pt, work, base.vmap, sepcfg); });
                    cuts.insert(cuts.end(), more.begin(), more.end());
                }
                add_fresh(std::move(cuts));
            }
            if (cfg.comb && step_wanted())
                add_fresh(timed(stats.comb_s, [&] {
                    return separate_2matching_and_comb(pt, work, base.vmap, sepcfg);
                }));
            if (cfg.tcomb && step_wanted())
                add_fresh(
                    timed(stats.comb_s, [&] { return separate_tcomb(pt, work, base.vmap, sepcfg); }));

            if (added == 0) {
                if (is_root && cfg.heuristic_period > 0 && iter % cfg.heuristic_period != 0)
                    maybe_run_heuristic(pt);
                if (is_root && !cfg.dump_lp_path.empty()) {
                    std::ofstream f(cfg.dump_lp_path);
                    write_lp_format(p, f);
                }
                out.fathomed = false;
                out.bound = value;
                out.point = std::move(pt);
                out.basis = std::move(basis);
                return out;
            }
        }
    }

    void branch(const Node& node, const LoopResult& lr) {
        const VariableMap& vm = base.vmap;
        auto frac = [&](double v) { return std::fabs(v - std::llround(v)); };

        std::vector<int> candidates;
        for (int t = 0; t < vm.n; ++t)
            if (frac(lr.point.y[t]) > cfg.eps_int) candidates.push_back(vm.yv(t));
        if (candidates.empty())
            for (int e = 0; e < vm.num_edges(); ++e)
                if (frac(lr.point.x[e]) > cfg.eps_int) candidates.push_back(e);
        if (candidates.empty()) throw ContractError("branch called on an integral point");

        auto value_of = [&](int col) {
            return vm.is_y(col) ? lr.point.y[vm.y_target(col)] : lr.point.x[col];
        };
        std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
            double fa = frac(value_of(a)), fb = frac(value_of(b));
            if (fa != fb) return fa > fb;
            return a < b;
        });
        if (static_cast<int>(candidates.size()) > cfg.sb_candidates)
            candidates.resize(cfg.sb_candidates);

        // Strong branching: probe both children with a short pivot budget and
        // score by the product of bound increases.
        LpProblem p = assemble(node);
        LpBasis warm = positional_basis(lr.basis, p);
        LpConfig probe_cfg;
        probe_cfg.max_pivots = cfg.sb_probe_pivots;

        int best_col = candidates.front();
        double best_score = -1.0;
        for (int col : candidates) {
            double v = value_of(col);
            double incs[2];
            for (int side = 0; side < 2; ++side) {
                double save_lo = p.lower[col], save_hi = p.upper[col];
                if (side == 0)
                    p.upper[col] = std::floor(v);
                else
                    p.lower[col] = std::ceil(v);
                LpResult pr = lp_solve(p, &warm, probe_cfg);
                stats.lp_pivots += pr.pivots;
                if (pr.status == LpStatus::Infeasible)
                    incs[side] = 1e10;
                else if (pr.reached_phase2)
                    incs[side] = std::max(0.0, pr.objective_value - lr.bound);
                else
                    incs[side] = 0.0;
                p.lower[col] = save_lo;
                p.upper[col] = save_hi;
            }
            double score = std::max(incs[0], 1e-4) * std::max(incs[1], 1e-4);
            if (score > best_score + 1e-12) {
                best_score = score;
                best_col = col;
            }
        }

        double v = value_of(best_col);
        for (int side = 0; side < 2; ++side) {
            Node child;
            child.fixings = node.fixings;
            if (side == 0)
                child.fixings.emplace_back(best_col, base.lower[best_col], std::floor(v));
            else
                child.fixings.emplace_back(best_col, std::ceil(v), base.upper[best_col]);
            child.bound = lr.bound;
            child.depth = node.depth + 1;
            child.seq = ++next_seq;
            child.basis = lr.basis;
            if (improvable(child.bound)) queue.push(std::move(child));
        }
    }

    SolveOutput run() {
        t0 = Clock::now();
        Node root;
        root.bound = -1e18;
        root.depth = 0;
        root.seq = 0;
        queue.push(std::move(root));

        while (!queue.empty()) {
            if (time_exceeded()) {
                timed_out = true;
                break;
            }
            Node node = queue.top();
            queue.pop();
            if (!improvable(node.bound)) continue;
            ++stats.nodes;
            LoopResult lr = cut_loop(node);
            if (timed_out) break;
            if (lr.fathomed) continue;
            branch(node, lr);
        }

        SolveOutput out;
        out.status = timed_out ? SolveStatus::TimeLimit : SolveStatus::Optimal;
        out.best = incumbent;
        out.solved = work;
        out.reduction = reduction;
        out.emitted = std::move(emitted);

        stats.best_cost = incumbent ? ub : -1;
        if (timed_out) {
            double lb = queue.empty() ? stats.root_lb : queue.top().bound;
            while (!queue.empty()) {
                lb = std::min(lb, queue.top().bound);
                queue.pop();
            }
            stats.global_lb = lb;
        } else {
            stats.global_lb = incumbent ? static_cast<double>(ub) : stats.root_lb;
        }
        stats.total_s = seconds_since(t0);
        out.stats = stats;
        return out;
    }
};

}  // namespace

LazyCheck integrality_and_lazy_check(const Instance& inst, const VariableMap& vm,
                                     const FractionalPoint& point) {
    LazyCheck out;
    std::vector<int> x, y;
    x.reserve(point.x.size());
    y.reserve(point.y.size());
    for (double v : point.x) x.push_back(static_cast<int>(std::llround(v)));
    for (double v : point.y) y.push_back(static_cast<int>(std::llround(v)));

    auto verdict = check_feasible(inst, x, y);
    if (std::holds_alternative<IntegerSolution>(verdict)) {
        out.solution = std::get<IntegerSolution>(verdict);
        return out;
    }
    const auto& viol = std::get<FeasibilityViolation>(verdict);
    if (viol.kind == FeasibilityViolation::BoundViolated ||
        viol.kind == FeasibilityViolation::DegreeViolated ||
        viol.kind == FeasibilityViolation::ClusterUncovered) {
        // Covering is an explicit LP row and bounds/degree hold at any LP
        // vertex, so this is numerical rounding damage.
        out.numerical_trouble = true;
        return out;
    }

    MuCache mu(inst);
    auto components = decode_components(inst, x);
    for (const auto& comp : components) {
        if (comp.depots.empty()) {
            std::vector<char> mask(vm.n, 0);
            for (int t : comp.targets) mask[t] = 1;
            int anchor = mu.mu(mask) != 0 ? -1 : comp.targets.front();
            out.cuts.push_back(make_gsec_row(vm, comp.targets, anchor));
            continue;
        }
        if (comp.depots.size() < 2) continue;
        for (const auto& seg : comp.segments) {
            if (seg.from == seg.to || seg.targets.size() < 2) continue;
            std::vector<char> dprime(vm.k, 0);
            dprime[seg.from] = 1;
            int j = seg.targets.front(), k = seg.targets.back();
            if (seg.targets.size() == 2) {
                out.cuts.push_back(make_4path_row(vm, j, k, dprime));
            } else {
                std::vector<int> interior(seg.targets.begin() + 1, seg.targets.end() - 1);
                std::vector<char> mask(vm.n, 0);
                for (int t : interior) mask[t] = 1;
                int anchor = mu.mu(mask) != 0 ? -1 : *std::min_element(interior.begin(), interior.end());
                std::vector<int> sbar = seg.targets;
                std::sort(sbar.begin(), sbar.end());
                out.cuts.push_back(make_pec_row(vm, sbar, j, k, dprime, anchor));
            }
        }
    }
    if (!out.cuts.empty()) return out;

    // Only 2-paths offend: replace each by the doubled edge at the cheaper
    // depot, which never increases cost (Sec. 2.1 equivalence).
    for (const auto& comp : components) {
        if (comp.depots.size() < 2) continue;
        for (const auto& seg : comp.segments) {
            if (seg.from == seg.to) continue;
            int t = seg.targets.front();
            x[vm.dt(seg.from, t)] -= 1;
            x[vm.dt(seg.to, t)] -= 1;
            int cheaper = inst.cost_dt(seg.from, t) <= inst.cost_dt(seg.to, t) ? seg.from : seg.to;
            x[vm.dt(cheaper, t)] += 2;
        }
    }
    auto fixed = check_feasible(inst, x, y);
    if (!std::holds_alternative<IntegerSolution>(fixed))
        throw ContractError("2-path rewrite left an infeasible point: " +
                            std::get<FeasibilityViolation>(fixed).message);
    out.solution = std::get<IntegerSolution>(fixed);
    return out;
}

SolveOutput solve(const Instance& inst, const SolverConfig& cfg) {
    Solver solver(inst, cfg);
    return solver.run();
}

}  // namespace gmdtsp
