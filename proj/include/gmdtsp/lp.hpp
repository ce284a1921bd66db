#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gmdtsp/model.hpp"

namespace gmdtsp {

enum class LpStatus { Optimal, Infeasible, IterationLimit };

enum class VarStatus : uint8_t { AtLower, AtUpper, Basic };

/// Warm-start token: one status per structural column followed by one per row
/// slack, in row order. Callers keep it aligned with their row list.
struct LpBasis {
    std::vector<VarStatus> cols;
};

struct LpConfig {
    long max_pivots = 1000000;
    int refactor_interval = 100;
};

struct LpProblem {
    std::vector<double> objective;  // minimized
    std::vector<double> lower, upper;
    std::vector<CutRow> rows;

    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }
};

struct LpResult {
    LpStatus status = LpStatus::IterationLimit;
    double objective_value = 0.0;
    std::vector<double> primal;  // structural columns
    LpBasis basis;
    long pivots = 0;
    bool reached_phase2 = false;
    double infeasibility = 0.0;  // phase-1 residual when not Optimal
};

/// Bounded-variable revised simplex: composite phase 1, Dantzig pricing with
/// Bland fallback on degenerate stalls, dense explicit basis inverse with
/// periodic refactorization. Deterministic for identical input and warm start.
LpResult lp_solve(const LpProblem& p, const LpBasis* warm = nullptr, const LpConfig& cfg = {});

/// Textual LP-interchange dump for debugging (flag-gated by callers).
void write_lp_format(const LpProblem& p, std::ostream& out);

}  // namespace gmdtsp
