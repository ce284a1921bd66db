#pragma once

#include <vector>

#include "gmdtsp/model.hpp"

namespace gmdtsp {

constexpr double kBigCapacity = 1e9;  // auxiliary forcing edges
constexpr double kSupportEps = 1e-9;  // entries below this are dropped

/// Capacitated undirected graph. Vertices are graph-local; `instance_vertex`
/// maps back to the combined instance range (-1 for auxiliary s/t vertices).
struct SupportGraph {
    struct Edge {
        int u, v;
        double cap;
    };
    std::vector<int> instance_vertex;
    std::vector<Edge> edges;

    int num_vertices() const { return static_cast<int>(instance_vertex.size()); }
    int add_vertex(int inst_vertex = -1) {
        instance_vertex.push_back(inst_vertex);
        return num_vertices() - 1;
    }
    void add_edge(int u, int v, double cap) { edges.push_back({u, v, cap}); }
};

/// Graph over {i in T : y*_i > 0} union D with capacities x*_e; entries below
/// kSupportEps dropped. graph_of[v] gives the graph vertex of instance vertex
/// v, or -1 when absent.
struct SupportBuild {
    SupportGraph graph;
    std::vector<int> graph_of;
};

SupportBuild build_support(const FractionalPoint& point, const Instance& inst,
                           const VariableMap& vm);

struct MinCutResult {
    double value = 0.0;
    std::vector<char> source_side;  // per graph vertex; contains s, excludes t

    // Flow on each edge, oriented u->v (negative means v->u); exposed so the
    // conservation and duality invariants can be checked.
    std::vector<double> edge_flow;
};

/// Highest-label push-relabel with the gap heuristic. The returned cut is the
/// residual-reachable set from s (canonical minimal source side); its capacity
/// equals the flow value within 1e-9 scale.
MinCutResult max_flow_min_cut(const SupportGraph& g, int s, int t);

/// Capacity of the cut (side, complement) counting each edge once.
double cut_capacity(const SupportGraph& g, const std::vector<char>& side);

}  // namespace gmdtsp
