#pragma once

#include <string>
#include <vector>

#include "gmdtsp/bnc.hpp"

namespace gmdtsp {

/// Canonical per-run artifact; `original` is the pre-reduction instance.
std::string run_report_json(const Instance& original, const SolveOutput& out,
                            const SolverConfig& cfg);

/// CSV aggregation over per-run JSON documents. Percentages are recomputed
/// from the stored fields; the comb column aggregates comb and tcomb.
std::string reports_to_results_csv(const std::vector<std::string>& report_jsons);
std::string reports_to_times_csv(const std::vector<std::string>& report_jsons);

}  // namespace gmdtsp
