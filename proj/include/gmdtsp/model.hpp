#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gmdtsp/instance.hpp"

namespace gmdtsp {

// Tolerances shared across the solver. The paper gives none; fixed here.
constexpr double kEpsCut = 1e-6;   // violation tolerance for adding cuts
constexpr double kEpsInt = 1e-6;   // integrality tolerance
constexpr double kEpsFeas = 1e-7;  // LP feasibility residual

/// Column layout: target-target edges first, then depot-target edges, then y.
/// |E| = C(n,2) + n*k; x in [0,1] on gamma(T), [0,2] on (D:T); y in [0,1].
struct VariableMap {
    int n = 0;  // targets
    int k = 0;  // depots

    int tt_count() const { return n * (n - 1) / 2; }
    int num_edges() const { return tt_count() + n * k; }
    int num_vars() const { return num_edges() + n; }

    int tt(int a, int b) const {
        if (a > b) std::swap(a, b);
        return a * (2 * n - a - 1) / 2 + (b - a - 1);
    }
    int dt(int d, int t) const { return tt_count() + d * n + t; }
    int yv(int t) const { return num_edges() + t; }

    bool is_tt(int var) const { return var < tt_count(); }
    bool is_dt(int var) const { return var >= tt_count() && var < num_edges(); }
    bool is_y(int var) const { return var >= num_edges(); }

    std::pair<int, int> tt_endpoints(int var) const;       // (a, b) target indices, a < b
    std::pair<int, int> dt_endpoints(int var) const {      // (depot, target)
        int r = var - tt_count();
        return {r / n, r % n};
    }
    int y_target(int var) const { return var - num_edges(); }

    double upper_bound(int var) const { return is_dt(var) ? 2.0 : 1.0; }
};

enum class RowSense { Ge, Le, Eq };

enum class CutClass { Degree, Assignment, Sec1, Sec2, Pec4, Pec, Comb, Tcomb };

const char* to_string(CutClass c);

/// Sparse inequality over the (x, y) columns.
struct CutRow {
    std::vector<std::pair<int, double>> coeffs;  // sorted by column, zero-free
    RowSense sense = RowSense::Ge;
    double rhs = 0.0;
    CutClass cls = CutClass::Sec1;

    /// Sorts, merges duplicate columns, prunes zeros.
    static CutRow make(std::vector<std::pair<int, double>> coeffs, RowSense sense, double rhs,
                       CutClass cls);

    /// Canonical hash over (sorted coeffs, sense, rhs) for pool deduplication.
    uint64_t fingerprint() const;
};

/// An LP point over the VariableMap columns. Points always come from LPs that
/// contain the degree equalities.
struct FractionalPoint {
    std::vector<double> x;  // size num_edges()
    std::vector<double> y;  // size n
    int source_node = -1;

    double var(const VariableMap& vm, int col) const {
        return vm.is_y(col) ? y[vm.y_target(col)] : x[col];
    }
};

double evaluate_lhs(const CutRow& row, const FractionalPoint& point, const VariableMap& vm);

/// Slack: lhs - rhs for >= rows, rhs - lhs for <= rows, -|lhs - rhs| for
/// equalities. Violated iff slack < -eps_cut.
double evaluate_row(const CutRow& row, const FractionalPoint& point, const VariableMap& vm);

struct BaseLp {
    VariableMap vmap;
    std::vector<double> objective;  // c_e on x, 0 on y
    std::vector<double> lower, upper;
    std::vector<CutRow> rows;  // degree equalities, then cluster covering
};

BaseLp build_base_lp(const Instance& inst);

struct Cycle {
    int depot;
    std::vector<int> targets;  // visit order
};

struct IntegerSolution {
    std::vector<int> x;  // size num_edges(), values 0/1/2
    std::vector<int> y;  // size n, values 0/1
    std::vector<Cycle> cycles;
    int64_t cost = 0;
};

struct FeasibilityViolation {
    enum Kind { BoundViolated, DegreeViolated, ClusterUncovered, Subtour, MultiDepotPath };
    Kind kind;
    std::string message;
    std::vector<int> subtour_targets;   // Subtour: the component's target set
    int depot_a = -1, depot_b = -1;     // MultiDepotPath endpoints
    std::vector<int> path_targets;      // MultiDepotPath interior targets, in order
    int index = -1;                     // violated target/cluster/column
};

using FeasibilityResult = std::variant<IntegerSolution, FeasibilityViolation>;

/// Verifies Eq. 2-3 and decodes the multigraph induced by x. Every component
/// with edges must be a closed walk through exactly one depot with no repeated
/// target; it is decoded into one cycle per depot visit. Components touching
/// two depots (including depot-target-depot 2-paths) are violations.
FeasibilityResult check_feasible(const Instance& inst, const std::vector<int>& x,
                                 const std::vector<int>& y);

/// Per-component structure used by check_feasible and the lazy-cut converter.
struct DecodedComponent {
    std::vector<int> targets;                // component targets
    std::vector<int> depots;                 // distinct depots in the component
    std::vector<Cycle> cycles;               // valid only when depots.size() == 1
    // Depot-to-depot walk segments (d_from, interior targets, d_to), each
    // traced once; present only when depots.size() >= 2.
    struct Segment {
        int from, to;
        std::vector<int> targets;
    };
    std::vector<Segment> segments;
};

std::vector<DecodedComponent> decode_components(const Instance& inst, const std::vector<int>& x);

/// x/y vectors for a cycle set (single-target cycles use the doubled edge).
void vectors_from_cycles(const Instance& inst, const VariableMap& vm,
                         const std::vector<Cycle>& cycles, std::vector<int>& x,
                         std::vector<int>& y);

int64_t solution_cost(const Instance& inst, const std::vector<Cycle>& cycles);

/// JSON {cost, cycles:[{depot, targets:[...]}]} using original file ids.
std::string solution_to_json(const Instance& inst, const IntegerSolution& sol);

/// Parses the JSON above back into cycles over `inst` (indices, not ids).
std::vector<Cycle> cycles_from_json(const Instance& inst, const std::string& json_text);

/// Plain-text tour listing, one cycle per line.
std::string solution_to_text(const Instance& inst, const IntegerSolution& sol);

}  // namespace gmdtsp
