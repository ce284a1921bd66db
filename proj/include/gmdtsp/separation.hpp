#pragma once

#include <vector>

#include "gmdtsp/maxflow.hpp"
#include "gmdtsp/model.hpp"

namespace gmdtsp {

/// mu(S) = number of clusters entirely contained in the target set S;
/// mu(S) = 0 iff every cluster keeps a member outside S.
struct MuCache {
    explicit MuCache(const Instance& inst) : inst_(&inst) {}
    int mu(const std::vector<char>& in_set) const {
        int count = 0;
        for (const auto& cluster : inst_->clusters) {
            bool inside = true;
            for (int t : cluster) inside = inside && in_set[t];
            count += inside ? 1 : 0;
        }
        return count;
    }

private:
    const Instance* inst_;
};

/// Handle-and-teeth family; teeth hold target indices for kind comb and
/// (depot, target) pairs for kind tcomb.
struct Comb {
    enum Kind { comb, tcomb };
    Kind kind = comb;
    std::vector<int> handle;               // target indices
    std::vector<std::vector<int>> teeth;   // target sets (comb)
    std::vector<std::pair<int, int>> depot_teeth;  // (depot, target) pairs (tcomb)
};

struct SeparationConfig {
    double eps_cut = kEpsCut;
    int max_cuts_per_class = 50;
    int threads = 1;
};

// Row constructors, shared with the lazy-cut converter and tests. All rows
// span the full edge set, not just the support.

/// x(delta(S)) >= 2 (anchor < 0, class sec1) or >= 2 y_anchor (class sec2).
CutRow make_gsec_row(const VariableMap& vm, const std::vector<int>& targets, int anchor);

/// x(D':{j}) + 3 x_jk + x({k}:D\D') <= 2(y_j + y_k); dprime indexed by depot.
CutRow make_4path_row(const VariableMap& vm, int j, int k, const std::vector<char>& dprime);

/// Cut-set GPEC over sbar = S + {j,k}: x(delta(sbar)) - x(D':{j}) -
/// x({k}:D\D') >= 1 (anchor < 0) or >= y_anchor.
CutRow make_pec_row(const VariableMap& vm, const std::vector<int>& sbar, int j, int k,
                    const std::vector<char>& dprime, int anchor);

/// Lifted comb row (Eq. 21 shape); anchors a_i/b_i chosen as the lowest-id
/// eligible target per tooth.
CutRow make_comb_row(const VariableMap& vm, const Instance& inst, const Comb& comb);

/// Lifted T-comb row; abar < 0 selects the |H \ teeth| = 1 variant.
CutRow make_tcomb_row(const VariableMap& vm, const std::vector<int>& handle,
                      const std::vector<std::pair<int, int>>& teeth, int abar);

std::vector<CutRow> separate_gsec_cluster(const FractionalPoint& point, const Instance& inst,
                                          const VariableMap& vm, const SeparationConfig& cfg = {});
std::vector<CutRow> separate_gsec_target(const FractionalPoint& point, const Instance& inst,
                                         const VariableMap& vm, const SeparationConfig& cfg = {});
std::vector<CutRow> separate_4path(const FractionalPoint& point, const Instance& inst,
                                   const VariableMap& vm, const SeparationConfig& cfg = {});
std::vector<CutRow> separate_gpec(const FractionalPoint& point, const Instance& inst,
                                  const VariableMap& vm, const SeparationConfig& cfg = {});
std::vector<CutRow> separate_2matching_and_comb(const FractionalPoint& point, const Instance& inst,
                                                const VariableMap& vm,
                                                const SeparationConfig& cfg = {});
std::vector<CutRow> separate_tcomb(const FractionalPoint& point, const Instance& inst,
                                   const VariableMap& vm, const SeparationConfig& cfg = {});

}  // namespace gmdtsp
