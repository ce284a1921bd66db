#pragma once

#include <optional>
#include <string>

#include "gmdtsp/lp.hpp"
#include "gmdtsp/model.hpp"
#include "gmdtsp/preprocess.hpp"
#include "gmdtsp/separation.hpp"

namespace gmdtsp {

enum class SolveStatus { Optimal, TimeLimit };

struct SolverConfig {
    double time_limit_s = 7200.0;
    bool preprocess = true;
    int threads = 0;  // 0: GMDTSP_THREADS env or 1
    bool all_families_per_round = false;
    int max_cuts_per_class = 50;
    int sb_candidates = 10;
    int sb_probe_pivots = 20;
    int heuristic_period = 5;  // root cut-loop iterations between heuristic runs
    double eps_cut = kEpsCut;
    double eps_int = kEpsInt;
    uint64_t seed = 0;  // reserved; the default path uses no randomness
    bool sec1 = true, sec2 = true, pec4 = true, pec = true, comb = true, tcomb = true;
    std::string dump_lp_path;  // when set, the root LP is written here
    bool collect_cuts = false; // keep every emitted row for validity testing
};

struct SolverStats {
    int64_t nodes = 0;
    double base_lb = 0.0;    // LP value of the base model at the root
    double root_lb = 0.0;    // LP value when the root cut loop terminated
    double global_lb = 0.0;  // best bound at termination
    int64_t best_cost = -1;  // final incumbent cost, -1 when none
    int64_t root_ub = -1;    // best LP-rounding heuristic cost at the root
    int64_t sec1 = 0, sec2 = 0, pec4 = 0, pec = 0, comb = 0, tcomb = 0;
    int64_t lazy = 0;  // subset of the above found on integral points
    long lp_solves = 0;
    long lp_pivots = 0;
    int heuristic_calls = 0;
    double total_s = 0.0, sep_s = 0.0, sec_s = 0.0, pec4_s = 0.0, pec_s = 0.0, comb_s = 0.0;

    int64_t cut_total() const { return sec1 + sec2 + pec4 + pec + comb + tcomb; }
};

struct SolveOutput {
    SolveStatus status = SolveStatus::Optimal;
    std::optional<IntegerSolution> best;  // over `solved`
    Instance solved;                      // instance the tree ran on (post-reduction)
    ReductionLog reduction;
    SolverStats stats;
    std::vector<CutRow> emitted;  // populated when collect_cuts
};

SolveOutput solve(const Instance& inst, const SolverConfig& cfg = {});

/// Converts an integral-but-infeasible LP point into lazy rows (subtours ->
/// GSECs, cross-depot segments with >= 2 targets -> Eq. 5 / GPEC rows), or an
/// equivalent feasible solution when only 2-paths offend. Exposed for tests.
struct LazyCheck {
    std::optional<IntegerSolution> solution;
    std::vector<CutRow> cuts;
    bool numerical_trouble = false;
};
LazyCheck integrality_and_lazy_check(const Instance& inst, const VariableMap& vm,
                                     const FractionalPoint& point);

}  // namespace gmdtsp
