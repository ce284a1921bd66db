#include "gmdtsp/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"

namespace gmdtsp {

std::pair<int, int> VariableMap::tt_endpoints(int var) const {
    // Invert the triangular index by scanning rows; n is small.
    int a = 0;
    while (a * (2 * n - a - 1) / 2 + (n - a - 1) <= var) ++a;
    int b = var - a * (2 * n - a - 1) / 2 + a + 1;
    return {a, b};
}

const char* to_string(CutClass c) {
    switch (c) {
        case CutClass::Degree: return "degree";
        case CutClass::Assignment: return "assignment";
        case CutClass::Sec1: return "sec1";
        case CutClass::Sec2: return "sec2";
        case CutClass::Pec4: return "4pec";
        case CutClass::Pec: return "pec";
        case CutClass::Comb: return "comb";
        case CutClass::Tcomb: return "tcomb";
    }
    return "?";
}

CutRow CutRow::make(std::vector<std::pair<int, double>> coeffs, RowSense sense, double rhs,
                    CutClass cls) {
    std::sort(coeffs.begin(), coeffs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    CutRow row;
    for (const auto& [col, val] : coeffs) {
        if (!row.coeffs.empty() && row.coeffs.back().first == col)
            row.coeffs.back().second += val;
        else
            row.coeffs.emplace_back(col, val);
    }
    row.coeffs.erase(std::remove_if(row.coeffs.begin(), row.coeffs.end(),
                                    [](const auto& cv) { return std::fabs(cv.second) < 1e-12; }),
                     row.coeffs.end());
    row.sense = sense;
    row.rhs = rhs;
    row.cls = cls;
    return row;
}

uint64_t CutRow::fingerprint() const {
    // FNV-1a over quantized coefficients; class is intentionally excluded so a
    // row reappearing under another tag still deduplicates.
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    auto quant = [](double v) { return static_cast<int64_t>(std::llround(v * 1e9)); };
    mix(static_cast<uint64_t>(sense));
    mix(static_cast<uint64_t>(quant(rhs)));
    for (const auto& [col, val] : coeffs) {
        mix(static_cast<uint64_t>(col));
        mix(static_cast<uint64_t>(quant(val)));
    }
    return h;
}

double evaluate_lhs(const CutRow& row, const FractionalPoint& point, const VariableMap& vm) {
    double lhs = 0.0;
    for (const auto& [col, val] : row.coeffs) {
        if (col < 0 || col >= vm.num_vars()) throw ContractError("evaluate_row: unknown column");
        lhs += val * point.var(vm, col);
    }
    return lhs;
}

double evaluate_row(const CutRow& row, const FractionalPoint& point, const VariableMap& vm) {
    double lhs = evaluate_lhs(row, point, vm);
    switch (row.sense) {
        case RowSense::Ge: return lhs - row.rhs;
        case RowSense::Le: return row.rhs - lhs;
        case RowSense::Eq: return -std::fabs(lhs - row.rhs);
    }
    return 0.0;
}

BaseLp build_base_lp(const Instance& inst) {
    BaseLp lp;
    lp.vmap = {inst.num_targets, inst.num_depots};
    const VariableMap& vm = lp.vmap;

    lp.objective.assign(vm.num_vars(), 0.0);
    lp.lower.assign(vm.num_vars(), 0.0);
    lp.upper.assign(vm.num_vars(), 0.0);
    for (int a = 0; a < vm.n; ++a)
        for (int b = a + 1; b < vm.n; ++b) lp.objective[vm.tt(a, b)] = static_cast<double>(inst.cost_tt(a, b));
    for (int d = 0; d < vm.k; ++d)
        for (int t = 0; t < vm.n; ++t) lp.objective[vm.dt(d, t)] = static_cast<double>(inst.cost_dt(d, t));
    for (int col = 0; col < vm.num_vars(); ++col) lp.upper[col] = vm.upper_bound(col);

    // Degree: x(delta(t)) = 2 y_t.
    for (int t = 0; t < vm.n; ++t) {
        std::vector<std::pair<int, double>> coeffs;
        for (int u = 0; u < vm.n; ++u)
            if (u != t) coeffs.emplace_back(vm.tt(t, u), 1.0);
        for (int d = 0; d < vm.k; ++d) coeffs.emplace_back(vm.dt(d, t), 1.0);
        coeffs.emplace_back(vm.yv(t), -2.0);
        lp.rows.push_back(CutRow::make(std::move(coeffs), RowSense::Eq, 0.0, CutClass::Degree));
    }
    // Covering: sum of y over each cluster >= 1.
    for (const auto& cluster : inst.clusters) {
        std::vector<std::pair<int, double>> coeffs;
        for (int t : cluster) coeffs.emplace_back(vm.yv(t), 1.0);
        lp.rows.push_back(CutRow::make(std::move(coeffs), RowSense::Ge, 1.0, CutClass::Assignment));
    }
    return lp;
}

std::vector<DecodedComponent> decode_components(const Instance& inst, const std::vector<int>& x) {
    const int k = inst.num_depots, n = inst.num_targets;
    VariableMap vm{n, k};

    // Adjacency with multiplicity over the combined vertex range.
    std::vector<std::vector<int>> adj(k + n);
    auto add_edge = [&](int u, int v, int mult) {
        for (int c = 0; c < mult; ++c) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
    };
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (x[vm.tt(a, b)] > 0) add_edge(k + a, k + b, x[vm.tt(a, b)]);
    for (int d = 0; d < k; ++d)
        for (int t = 0; t < n; ++t)
            if (x[vm.dt(d, t)] > 0) add_edge(d, k + t, x[vm.dt(d, t)]);
    for (auto& l : adj) std::sort(l.begin(), l.end());

    std::vector<int> comp(k + n, -1);
    std::vector<DecodedComponent> out;
    for (int start = 0; start < k + n; ++start) {
        if (comp[start] >= 0 || adj[start].empty()) continue;
        int id = static_cast<int>(out.size());
        DecodedComponent dc;
        std::vector<int> stack{start};
        comp[start] = id;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (u < k)
                dc.depots.push_back(u);
            else
                dc.targets.push_back(u - k);
            for (int v : adj[u])
                if (comp[v] < 0) {
                    comp[v] = id;
                    stack.push_back(v);
                }
        }
        std::sort(dc.depots.begin(), dc.depots.end());
        std::sort(dc.targets.begin(), dc.targets.end());

        // Unused edge copies per undirected pair, for walk tracing.
        std::map<std::pair<int, int>, int> remaining;
        auto key = [](int u, int v) { return std::make_pair(std::min(u, v), std::max(u, v)); };
        for (int d : dc.depots)
            for (int v : adj[d]) remaining[key(d, v)]++;
        for (int t : dc.targets)
            for (int v : adj[k + t])
                if (v > k + t) remaining[key(k + t, v)]++;

        auto take_next = [&](int u) -> int {
            for (int v : adj[u]) {
                auto it = remaining.find(key(u, v));
                if (it != remaining.end() && it->second > 0) {
                    --it->second;
                    return v;
                }
            }
            return -1;
        };

        // Trace walks depot-to-depot. With one depot each walk is a cycle;
        // with several, each traced segment witnesses a multi-depot path.
        for (int d : dc.depots) {
            for (;;) {
                int first = take_next(d);
                if (first < 0) break;
                DecodedComponent::Segment seg;
                seg.from = d;
                int u = first;
                while (u >= k) {
                    seg.targets.push_back(u - k);
                    u = take_next(u);  // targets have degree 2, so this exists
                }
                if (u < 0) throw ContractError("decode_components: target degree is not 2");
                seg.to = u;
                if (dc.depots.size() == 1)
                    dc.cycles.push_back(Cycle{d, seg.targets});
                else
                    dc.segments.push_back(std::move(seg));
            }
        }
        out.push_back(std::move(dc));
    }
    return out;
}

FeasibilityResult check_feasible(const Instance& inst, const std::vector<int>& x,
                                 const std::vector<int>& y) {
    const int k = inst.num_depots, n = inst.num_targets;
    VariableMap vm{n, k};
    if (static_cast<int>(x.size()) != vm.num_edges() || static_cast<int>(y.size()) != n)
        throw ContractError("check_feasible: vector sizes do not match the instance");

    for (int col = 0; col < vm.num_edges(); ++col) {
        int ub = vm.is_dt(col) ? 2 : 1;
        if (x[col] < 0 || x[col] > ub) {
            FeasibilityViolation v;
            v.kind = FeasibilityViolation::BoundViolated;
            v.index = col;
            v.message = "edge variable out of bounds";
            return v;
        }
    }
    for (int t = 0; t < n; ++t)
        if (y[t] < 0 || y[t] > 1) {
            FeasibilityViolation v;
            v.kind = FeasibilityViolation::BoundViolated;
            v.index = vm.yv(t);
            v.message = "visit variable out of bounds";
            return v;
        }

    // Eq. 2: degree of every target equals 2 y_t.
    for (int t = 0; t < n; ++t) {
        int deg = 0;
        for (int u = 0; u < n; ++u)
            if (u != t) deg += x[vm.tt(t, u)];
        for (int d = 0; d < k; ++d) deg += x[vm.dt(d, t)];
        if (deg != 2 * y[t]) {
            FeasibilityViolation v;
            v.kind = FeasibilityViolation::DegreeViolated;
            v.index = t;
            v.message = "degree equality violated at target " + std::to_string(inst.target_id[t]);
            return v;
        }
    }
    // Eq. 3: every cluster visited.
    for (int h = 0; h < inst.num_clusters(); ++h) {
        bool covered = false;
        for (int t : inst.clusters[h]) covered = covered || y[t] == 1;
        if (!covered) {
            FeasibilityViolation v;
            v.kind = FeasibilityViolation::ClusterUncovered;
            v.index = h;
            v.message = "cluster " + std::to_string(h + 1) + " uncovered";
            return v;
        }
    }

    auto components = decode_components(inst, x);
    IntegerSolution sol;
    sol.x = x;
    sol.y = y;
    for (const auto& dc : components) {
        if (dc.depots.empty()) {
            FeasibilityViolation v;
            v.kind = FeasibilityViolation::Subtour;
            v.subtour_targets = dc.targets;
            std::ostringstream msg;
            msg << "subtour over {";
            for (size_t i = 0; i < dc.targets.size(); ++i)
                msg << (i ? "," : "") << inst.target_id[dc.targets[i]];
            msg << "}";
            v.message = msg.str();
            return v;
        }
        if (dc.depots.size() >= 2) {
            FeasibilityViolation v;
            v.kind = FeasibilityViolation::MultiDepotPath;
            // Report the first traced cross-depot segment.
            for (const auto& seg : dc.segments)
                if (seg.from != seg.to) {
                    v.depot_a = seg.from;
                    v.depot_b = seg.to;
                    v.path_targets = seg.targets;
                    break;
                }
            v.message = "path with more than one depot";
            return v;
        }
        for (const auto& c : dc.cycles) sol.cycles.push_back(c);
    }
    sol.cost = solution_cost(inst, sol.cycles);
    return sol;
}

void vectors_from_cycles(const Instance& inst, const VariableMap& vm,
                         const std::vector<Cycle>& cycles, std::vector<int>& x,
                         std::vector<int>& y) {
    x.assign(vm.num_edges(), 0);
    y.assign(vm.n, 0);
    for (const auto& c : cycles) {
        if (c.targets.empty()) continue;
        for (int t : c.targets) y[t] = 1;
        if (c.targets.size() == 1) {
            x[vm.dt(c.depot, c.targets[0])] += 2;
            continue;
        }
        x[vm.dt(c.depot, c.targets.front())] += 1;
        x[vm.dt(c.depot, c.targets.back())] += 1;
        for (size_t i = 0; i + 1 < c.targets.size(); ++i)
            x[vm.tt(c.targets[i], c.targets[i + 1])] += 1;
    }
}

int64_t solution_cost(const Instance& inst, const std::vector<Cycle>& cycles) {
    int64_t cost = 0;
    for (const auto& c : cycles) {
        if (c.targets.empty()) continue;
        if (c.targets.size() == 1) {
            cost += 2 * inst.cost_dt(c.depot, c.targets[0]);
            continue;
        }
        cost += inst.cost_dt(c.depot, c.targets.front());
        cost += inst.cost_dt(c.depot, c.targets.back());
        for (size_t i = 0; i + 1 < c.targets.size(); ++i)
            cost += inst.cost_tt(c.targets[i], c.targets[i + 1]);
    }
    return cost;
}

std::string solution_to_json(const Instance& inst, const IntegerSolution& sol) {
    nlohmann::json j;
    j["cost"] = sol.cost;
    j["cycles"] = nlohmann::json::array();
    for (const auto& c : sol.cycles) {
        nlohmann::json jc;
        jc["depot"] = inst.depot_id[c.depot];
        jc["targets"] = nlohmann::json::array();
        for (int t : c.targets) jc["targets"].push_back(inst.target_id[t]);
        j["cycles"].push_back(std::move(jc));
    }
    return j.dump(2);
}

std::vector<Cycle> cycles_from_json(const Instance& inst, const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    std::map<int, int> depot_index, target_index;
    for (int d = 0; d < inst.num_depots; ++d) depot_index[inst.depot_id[d]] = d;
    for (int t = 0; t < inst.num_targets; ++t) target_index[inst.target_id[t]] = t;

    std::vector<Cycle> cycles;
    for (const auto& jc : j.at("cycles")) {
        Cycle c;
        int depot_id = jc.at("depot").get<int>();
        auto dit = depot_index.find(depot_id);
        if (dit == depot_index.end())
            throw ContractError("solution references unknown depot id " + std::to_string(depot_id));
        c.depot = dit->second;
        for (const auto& jt : jc.at("targets")) {
            int id = jt.get<int>();
            auto tit = target_index.find(id);
            if (tit == target_index.end())
                throw ContractError("solution references unknown target id " + std::to_string(id));
            c.targets.push_back(tit->second);
        }
        cycles.push_back(std::move(c));
    }
    return cycles;
}

std::string solution_to_text(const Instance& inst, const IntegerSolution& sol) {
    std::ostringstream out;
    out << "cost " << sol.cost << "\n";
    for (const auto& c : sol.cycles) {
        out << inst.depot_id[c.depot];
        for (int t : c.targets) out << " " << inst.target_id[t];
        out << " " << inst.depot_id[c.depot] << "\n";
    }
    return out.str();
}

}  // namespace gmdtsp
