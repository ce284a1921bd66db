#include "gmdtsp/report.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace gmdtsp {

using nlohmann::json;

std::string run_report_json(const Instance& original, const SolveOutput& out,
                            const SolverConfig& cfg) {
    const SolverStats& st = out.stats;
    json j;
    j["name"] = original.name;
    j["status"] = out.status == SolveStatus::Optimal ? "Optimal" : "TimeLimit";
    j["depots"] = original.num_depots;
    j["targets"] = original.num_targets;
    j["clusters"] = original.num_clusters();

    if (out.best)
        j["opt"] = out.best->cost;
    else
        j["opt"] = nullptr;
    j["lb"] = st.root_lb;
    j["base_lb"] = st.base_lb;
    j["global_lb"] = st.global_lb;
    if (st.root_ub >= 0)
        j["ub"] = st.root_ub;
    else
        j["ub"] = nullptr;
    j["nodes"] = st.nodes;

    j["cuts"] = {{"sec1", st.sec1}, {"sec2", st.sec2}, {"4pec", st.pec4},
                 {"pec", st.pec},   {"comb", st.comb}, {"tcomb", st.tcomb},
                 {"lazy", st.lazy}};
    j["times"] = {{"total", st.total_s}, {"sep", st.sep_s},   {"sec", st.sec_s},
                  {"4pec", st.pec4_s},   {"pec", st.pec_s},   {"comb", st.comb_s}};
    j["lp"] = {{"solves", st.lp_solves}, {"pivots", st.lp_pivots}};
    j["heuristic_calls"] = st.heuristic_calls;

    json red;
    red["original_targets"] = out.reduction.original_size;
    red["reduced_targets"] = out.reduction.reduced_size;
    red["removed"] = json::array();
    for (const auto& [rm, dom] : out.reduction.removed) red["removed"].push_back({rm, dom});
    j["reduction"] = std::move(red);

    if (out.best) j["solution"] = json::parse(solution_to_json(out.solved, *out.best));

    j["config"] = {{"time_limit_s", cfg.time_limit_s},
                   {"preprocess", cfg.preprocess},
                   {"threads", cfg.threads},
                   {"all_families_per_round", cfg.all_families_per_round},
                   {"max_cuts_per_class", cfg.max_cuts_per_class},
                   {"sb_candidates", cfg.sb_candidates},
                   {"sb_probe_pivots", cfg.sb_probe_pivots},
                   {"heuristic_period", cfg.heuristic_period},
                   {"eps_cut", cfg.eps_cut},
                   {"eps_int", cfg.eps_int},
                   {"seed", cfg.seed},
                   {"families",
                    {{"sec1", cfg.sec1},
                     {"sec2", cfg.sec2},
                     {"4pec", cfg.pec4},
                     {"pec", cfg.pec},
                     {"comb", cfg.comb},
                     {"tcomb", cfg.tcomb}}}};
    return j.dump(2);
}

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << std::fixed << v;
    return s.str();
}

}  // namespace

std::string reports_to_results_csv(const std::vector<std::string>& report_jsons) {
    std::ostringstream out;
    out << "name,opt,LB,%LB,UB,%UB,sec1,sec2,4pec,pec,comb,nodes\n";
    for (const auto& text : report_jsons) {
        json j = json::parse(text);
        out << j["name"].get<std::string>() << ",";
        bool has_opt = !j["opt"].is_null();
        double opt = has_opt ? j["opt"].get<double>() : 0.0;
        double lb = j["lb"].get<double>();
        out << (has_opt ? std::to_string(j["opt"].get<int64_t>()) : "") << ",";
        out << fmt(lb) << ",";
        out << (has_opt && opt != 0.0 ? fmt(100.0 * lb / opt) : "") << ",";
        if (!j["ub"].is_null()) {
            double ub = j["ub"].get<double>();
            out << j["ub"].get<int64_t>() << ","
                << (has_opt && opt != 0.0 ? fmt(100.0 * ub / opt) : "") << ",";
        } else {
            out << ",,";
        }
        const auto& c = j["cuts"];
        out << c["sec1"].get<int64_t>() << "," << c["sec2"].get<int64_t>() << ","
            << c["4pec"].get<int64_t>() << "," << c["pec"].get<int64_t>() << ","
            << (c["comb"].get<int64_t>() + c["tcomb"].get<int64_t>()) << ","
            << j["nodes"].get<int64_t>() << "\n";
    }
    return out.str();
}

std::string reports_to_times_csv(const std::vector<std::string>& report_jsons) {
    std::ostringstream out;
    out << "name,total-t,sep-t,sec-t,4pec-t,pec-t,comb-t,%pec\n";
    for (const auto& text : report_jsons) {
        json j = json::parse(text);
        const auto& t = j["times"];
        double sep = t["sep"].get<double>();
        double pec = t["pec"].get<double>();
        out << j["name"].get<std::string>() << "," << fmt(t["total"].get<double>()) << ","
            << fmt(sep) << "," << fmt(t["sec"].get<double>()) << "," << fmt(t["4pec"].get<double>())
            << "," << fmt(pec) << "," << fmt(t["comb"].get<double>()) << ","
            << fmt(sep > 0.0 ? 100.0 * pec / sep : 0.0) << "\n";
    }
    return out.str();
}

}  // namespace gmdtsp
