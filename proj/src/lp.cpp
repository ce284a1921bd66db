#include "gmdtsp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace gmdtsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTolCost = 1e-9;    // reduced-cost threshold
constexpr double kTolPivot = 1e-9;   // minimum acceptable pivot magnitude
constexpr double kTolFeas = 1e-9;    // bound-violation classification
constexpr double kTolZero = 1e-12;

struct Simplex {
    const LpProblem& p;
    const LpConfig& cfg;

    int ns;  // structural columns
    int m;   // rows
    int nc;  // total columns = ns + m

    // Column-wise matrix; slack column ns+i is the unit column of row i.
    std::vector<std::vector<std::pair<int, double>>> cols;
    std::vector<double> lo, up;  // per column
    std::vector<double> cost;    // structural objective, 0 on slacks
    std::vector<double> rhs;

    std::vector<VarStatus> state;  // per column
    std::vector<int> basic;        // column of each basis position
    std::vector<int> pos_of;       // column -> basis position or -1
    std::vector<double> binv;      // m*m row-major
    std::vector<double> xval;      // per column (basic entries mirror xb)

    long pivots = 0;
    int since_refactor = 0;
    int degenerate_streak = 0;
    bool bland = false;

    Simplex(const LpProblem& problem, const LpConfig& config) : p(problem), cfg(config) {
        ns = p.num_vars();
        m = p.num_rows();
        nc = ns + m;
        cols.assign(nc, {});
        lo.assign(nc, 0.0);
        up.assign(nc, 0.0);
        cost.assign(nc, 0.0);
        rhs.assign(m, 0.0);
        for (int j = 0; j < ns; ++j) {
            lo[j] = p.lower[j];
            up[j] = p.upper[j];
            cost[j] = p.objective[j];
        }
        for (int i = 0; i < m; ++i) {
            const CutRow& row = p.rows[i];
            rhs[i] = row.rhs;
            for (const auto& [col, val] : row.coeffs) cols[col].emplace_back(i, val);
            int s = ns + i;
            cols[s].emplace_back(i, 1.0);
            switch (row.sense) {
                case RowSense::Le: lo[s] = 0.0; up[s] = kInf; break;
                case RowSense::Ge: lo[s] = -kInf; up[s] = 0.0; break;
                case RowSense::Eq: lo[s] = 0.0; up[s] = 0.0; break;
            }
        }
    }

    double nonbasic_value(int j) const { return state[j] == VarStatus::AtUpper ? up[j] : lo[j]; }

    // Forces nonbasic statuses onto finite bounds.
    void sanitize_status(int j) {
        if (state[j] == VarStatus::Basic) return;
        if (state[j] == VarStatus::AtLower && !std::isfinite(lo[j])) state[j] = VarStatus::AtUpper;
        if (state[j] == VarStatus::AtUpper && !std::isfinite(up[j])) state[j] = VarStatus::AtLower;
    }

    void load_basis(const LpBasis* warm) {
        state.assign(nc, VarStatus::AtLower);
        if (warm && static_cast<int>(warm->cols.size()) == nc)
            state = warm->cols;
        for (int j = 0; j < nc; ++j) sanitize_status(j);

        basic.clear();
        for (int j = 0; j < nc; ++j)
            if (state[j] == VarStatus::Basic) basic.push_back(j);
        if (static_cast<int>(basic.size()) > m) {
            // Demote the highest-index extras to their nearest finite bound.
            while (static_cast<int>(basic.size()) > m) {
                int j = basic.back();
                basic.pop_back();
                state[j] = std::isfinite(lo[j]) ? VarStatus::AtLower : VarStatus::AtUpper;
            }
        }
        if (static_cast<int>(basic.size()) < m) {
            std::vector<char> row_has_slack_basic(m, 0);
            for (int j : basic)
                if (j >= ns) row_has_slack_basic[j - ns] = 1;
            for (int i = 0; i < m && static_cast<int>(basic.size()) < m; ++i) {
                int s = ns + i;
                if (state[s] != VarStatus::Basic) {
                    state[s] = VarStatus::Basic;
                    basic.push_back(s);
                }
            }
        }
        std::sort(basic.begin(), basic.end());
        if (!factorize()) {
            // Singular warm basis: fall back to the all-slack basis.
            state.assign(nc, VarStatus::AtLower);
            for (int j = 0; j < nc; ++j) sanitize_status(j);
            basic.clear();
            for (int i = 0; i < m; ++i) {
                state[ns + i] = VarStatus::Basic;
                basic.push_back(ns + i);
            }
            if (!factorize()) throw ContractError("lp: slack basis failed to factorize");
        }
        compute_values();
    }

    // Gauss-Jordan inversion of the basis matrix with partial pivoting.
    bool factorize() {
        pos_of.assign(nc, -1);
        for (int i = 0; i < m; ++i) pos_of[basic[i]] = i;

        std::vector<double> a(static_cast<size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i)
            for (const auto& [row, val] : cols[basic[i]]) a[static_cast<size_t>(row) * m + i] = val;
        binv.assign(static_cast<size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i) binv[static_cast<size_t>(i) * m + i] = 1.0;

        for (int c = 0; c < m; ++c) {
            int piv = -1;
            double best = 1e-11;
            for (int r = c; r < m; ++r) {
                double v = std::fabs(a[static_cast<size_t>(r) * m + c]);
                if (v > best) {
                    best = v;
                    piv = r;
                }
            }
            if (piv < 0) return false;
            if (piv != c) {
                for (int j = 0; j < m; ++j) {
                    std::swap(a[static_cast<size_t>(piv) * m + j], a[static_cast<size_t>(c) * m + j]);
                    std::swap(binv[static_cast<size_t>(piv) * m + j],
                              binv[static_cast<size_t>(c) * m + j]);
                }
            }
            double d = a[static_cast<size_t>(c) * m + c];
            double inv = 1.0 / d;
            for (int j = 0; j < m; ++j) {
                a[static_cast<size_t>(c) * m + j] *= inv;
                binv[static_cast<size_t>(c) * m + j] *= inv;
            }
            for (int r = 0; r < m; ++r) {
                if (r == c) continue;
                double f = a[static_cast<size_t>(r) * m + c];
                if (f == 0.0) continue;
                for (int j = 0; j < m; ++j) {
                    a[static_cast<size_t>(r) * m + j] -= f * a[static_cast<size_t>(c) * m + j];
                    binv[static_cast<size_t>(r) * m + j] -= f * binv[static_cast<size_t>(c) * m + j];
                }
            }
        }
        since_refactor = 0;
        return true;
    }

    // x_B = B^-1 (rhs - A_N x_N); nonbasics sit at their bounds.
    void compute_values() {
        xval.assign(nc, 0.0);
        std::vector<double> r = rhs;
        for (int j = 0; j < nc; ++j) {
            if (state[j] == VarStatus::Basic) continue;
            double v = nonbasic_value(j);
            xval[j] = v;
            if (v != 0.0)
                for (const auto& [row, val] : cols[j]) r[row] -= val * v;
        }
        for (int i = 0; i < m; ++i) {
            double v = 0.0;
            const double* row = &binv[static_cast<size_t>(i) * m];
            for (int t = 0; t < m; ++t) v += row[t] * r[t];
            xval[basic[i]] = v;
        }
    }

    std::vector<double> ftran(int j) const {
        std::vector<double> w(m, 0.0);
        for (const auto& [row, val] : cols[j])
            for (int i = 0; i < m; ++i) w[i] += binv[static_cast<size_t>(i) * m + row] * val;
        return w;
    }

    // y^T = cb^T B^-1 where cb is indexed by basis position.
    std::vector<double> btran(const std::vector<double>& cb) const {
        std::vector<double> y(m, 0.0);
        for (int i = 0; i < m; ++i) {
            if (cb[i] == 0.0) continue;
            const double* row = &binv[static_cast<size_t>(i) * m];
            for (int r = 0; r < m; ++r) y[r] += cb[i] * row[r];
        }
        return y;
    }

    double total_infeasibility(std::vector<int>* sigma_out = nullptr) const {
        double sum = 0.0;
        if (sigma_out) sigma_out->assign(m, 0);
        for (int i = 0; i < m; ++i) {
            int j = basic[i];
            double v = xval[j];
            if (v < lo[j] - kTolFeas) {
                sum += lo[j] - v;
                if (sigma_out) (*sigma_out)[i] = -1;
            } else if (v > up[j] + kTolFeas) {
                sum += v - up[j];
                if (sigma_out) (*sigma_out)[i] = 1;
            }
        }
        return sum;
    }

    struct Entering {
        int col = -1;
        double dj = 0.0;
        int dir = 0;  // +1 increase from lower, -1 decrease from upper
    };

    Entering price(bool phase1, const std::vector<int>& sigma) {
        std::vector<double> cb(m, 0.0);
        for (int i = 0; i < m; ++i)
            cb[i] = phase1 ? static_cast<double>(sigma[i]) : cost[basic[i]];
        std::vector<double> y = btran(cb);

        Entering best;
        double best_score = kTolCost;
        for (int j = 0; j < nc; ++j) {
            if (state[j] == VarStatus::Basic) continue;
            if (lo[j] == up[j]) continue;  // fixed
            double dj = (phase1 ? 0.0 : cost[j]);
            for (const auto& [row, val] : cols[j]) dj -= y[row] * val;
            int dir = 0;
            if (state[j] == VarStatus::AtLower && dj < -kTolCost)
                dir = 1;
            else if (state[j] == VarStatus::AtUpper && dj > kTolCost)
                dir = -1;
            if (dir == 0) continue;
            if (bland) return {j, dj, dir};
            double score = std::fabs(dj);
            if (score > best_score + kTolZero) {
                best_score = score;
                best = {j, dj, dir};
            }
        }
        return best;
    }

    struct Leave {
        double theta = kInf;
        int pos = -1;      // basis position, -1 = entering bound flip
        int at_upper = 0;  // bound the leaving variable lands on
    };

    Leave ratio_test(int j, int dir, const std::vector<double>& w, bool phase1,
                     const std::vector<int>& sigma) {
        Leave lv;
        if (std::isfinite(up[j]) && std::isfinite(lo[j])) lv.theta = up[j] - lo[j];

        for (int i = 0; i < m; ++i) {
            double d = -dir * w[i];
            if (std::fabs(d) < kTolPivot) continue;
            int bj = basic[i];
            double v = xval[bj];
            double theta = kInf;
            int at_upper = 0;
            int sg = phase1 ? sigma[i] : 0;
            if (sg == 0) {
                if (d < 0 && std::isfinite(lo[bj])) {
                    theta = (v - lo[bj]) / (-d);
                    at_upper = 0;
                } else if (d > 0 && std::isfinite(up[bj])) {
                    theta = (up[bj] - v) / d;
                    at_upper = 1;
                }
            } else if (sg < 0) {
                // Below its lower bound; blocks on reaching it.
                if (d > 0) {
                    theta = (lo[bj] - v) / d;
                    at_upper = 0;
                }
            } else {
                if (d < 0) {
                    theta = (v - up[bj]) / (-d);
                    at_upper = 1;
                }
            }
            if (theta < -1e-9) theta = 0.0;
            theta = std::max(theta, 0.0);
            if (theta < lv.theta - kTolZero ||
                (theta < lv.theta + kTolZero && lv.pos >= 0 &&
                 std::fabs(w[i]) > std::fabs(w[lv.pos]) + kTolZero)) {
                lv.theta = theta;
                lv.pos = i;
                lv.at_upper = at_upper;
            }
        }
        return lv;
    }

    void pivot(int j, int dir, const std::vector<double>& w, const Leave& lv) {
        double theta = lv.theta;
        // Move entering and basics.
        xval[j] += dir * theta;
        for (int i = 0; i < m; ++i)
            if (w[i] != 0.0) xval[basic[i]] -= dir * theta * w[i];

        if (lv.pos < 0) {
            // Bound flip.
            state[j] = (dir > 0) ? VarStatus::AtUpper : VarStatus::AtLower;
            xval[j] = nonbasic_value(j);
            return;
        }
        int leaving = basic[lv.pos];
        state[leaving] = lv.at_upper ? VarStatus::AtUpper : VarStatus::AtLower;
        xval[leaving] = nonbasic_value(leaving);
        state[j] = VarStatus::Basic;
        basic[lv.pos] = j;
        pos_of[leaving] = -1;
        pos_of[j] = lv.pos;

        // binv <- E^-1 binv for the elementary column w at position lv.pos.
        double piv = w[lv.pos];
        double* prow = &binv[static_cast<size_t>(lv.pos) * m];
        double invp = 1.0 / piv;
        for (int c = 0; c < m; ++c) prow[c] *= invp;
        for (int i = 0; i < m; ++i) {
            if (i == lv.pos) continue;
            double f = w[i];
            if (f == 0.0) continue;
            double* row = &binv[static_cast<size_t>(i) * m];
            for (int c = 0; c < m; ++c) row[c] -= f * prow[c];
        }
        ++since_refactor;
        if (since_refactor >= cfg.refactor_interval) {
            factorize();
            compute_values();
        }
    }

    double objective() const {
        double v = 0.0;
        for (int j = 0; j < ns; ++j) v += cost[j] * xval[j];
        return v;
    }

    LpResult run() {
        LpResult res;
        std::vector<int> sigma;
        for (;;) {
            if (pivots >= cfg.max_pivots) {
                res.status = LpStatus::IterationLimit;
                break;
            }
            double infeas = total_infeasibility(&sigma);
            bool phase1 = infeas > kTolFeas;
            res.reached_phase2 = res.reached_phase2 || !phase1;
            res.infeasibility = infeas;

            Entering e = price(phase1, sigma);
            if (e.col < 0) {
                res.status = phase1 ? LpStatus::Infeasible : LpStatus::Optimal;
                break;
            }
            std::vector<double> w = ftran(e.col);
            Leave lv = ratio_test(e.col, e.dir, w, phase1, sigma);
            if (!std::isfinite(lv.theta)) {
                if (phase1) throw ContractError("lp: phase-1 ray, inconsistent state");
                throw ContractError("lp: unbounded objective");
            }
            pivot(e.col, e.dir, w, lv);
            ++pivots;

            if (lv.theta <= kTolZero) {
                if (++degenerate_streak > 64) bland = true;
            } else {
                degenerate_streak = 0;
                bland = false;
            }
        }

        res.pivots = pivots;
        res.objective_value = objective();
        res.primal.assign(xval.begin(), xval.begin() + ns);
        res.basis.cols = state;
        if (res.status == LpStatus::Optimal) {
            // Snap basics within tolerance of a bound onto it.
            for (int j = 0; j < ns; ++j) {
                if (std::isfinite(lo[j]) && std::fabs(res.primal[j] - lo[j]) < 1e-9)
                    res.primal[j] = lo[j];
                else if (std::isfinite(up[j]) && std::fabs(res.primal[j] - up[j]) < 1e-9)
                    res.primal[j] = up[j];
            }
            double v = 0.0;
            for (int j = 0; j < ns; ++j) v += cost[j] * res.primal[j];
            res.objective_value = v;
        }
        return res;
    }
};

}  // namespace

LpResult lp_solve(const LpProblem& p, const LpBasis* warm, const LpConfig& cfg) {
    Simplex spx(p, cfg);
    spx.load_basis(warm);
    return spx.run();
}

void write_lp_format(const LpProblem& p, std::ostream& out) {
    out << "Minimize\n obj:";
    for (int j = 0; j < p.num_vars(); ++j)
        if (p.objective[j] != 0.0)
            out << (p.objective[j] >= 0 ? " +" : " ") << p.objective[j] << " c" << j;
    out << "\nSubject To\n";
    for (int i = 0; i < p.num_rows(); ++i) {
        const CutRow& r = p.rows[i];
        out << " r" << i << ":";
        for (const auto& [col, val] : r.coeffs)
            out << (val >= 0 ? " +" : " ") << val << " c" << col;
        switch (r.sense) {
            case RowSense::Ge: out << " >= "; break;
            case RowSense::Le: out << " <= "; break;
            case RowSense::Eq: out << " = "; break;
        }
        out << r.rhs << "\n";
    }
    out << "Bounds\n";
    for (int j = 0; j < p.num_vars(); ++j)
        out << " " << p.lower[j] << " <= c" << j << " <= " << p.upper[j] << "\n";
    out << "End\n";
}

}  // namespace gmdtsp
