#include "gmdtsp.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "gmdtsp/bnc.hpp"
#include "gmdtsp/oracle.hpp"
#include "gmdtsp/report.hpp"
#include "json.hpp"

using namespace gmdtsp;

struct gmdtsp_instance {
    Instance inst;
};

struct gmdtsp_result {
    long long cost = -1;
    bool optimal = false;
    std::string json;
};

namespace {

void put_error(char* err, size_t errlen, const std::string& msg) {
    if (!err || errlen == 0) return;
    std::snprintf(err, errlen, "%s", msg.c_str());
}

template <typename Fn>
int guarded(char* err, size_t errlen, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        put_error(err, errlen, e.what());
        return GMDTSP_ERROR;
    }
}

SolverConfig config_from_json(const char* config_json) {
    SolverConfig cfg;
    if (!config_json || !*config_json) return cfg;
    nlohmann::json j = nlohmann::json::parse(config_json);
    cfg.time_limit_s = j.value("time_limit_s", cfg.time_limit_s);
    cfg.preprocess = j.value("preprocess", cfg.preprocess);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.all_families_per_round = j.value("all_families_per_round", cfg.all_families_per_round);
    cfg.max_cuts_per_class = j.value("max_cuts_per_class", cfg.max_cuts_per_class);
    cfg.sb_candidates = j.value("sb_candidates", cfg.sb_candidates);
    cfg.sb_probe_pivots = j.value("sb_probe_pivots", cfg.sb_probe_pivots);
    cfg.heuristic_period = j.value("heuristic_period", cfg.heuristic_period);
    cfg.eps_cut = j.value("eps_cut", cfg.eps_cut);
    cfg.eps_int = j.value("eps_int", cfg.eps_int);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.dump_lp_path = j.value("dump_lp_path", cfg.dump_lp_path);
    if (j.contains("families")) {
        const auto& f = j["families"];
        cfg.sec1 = f.value("sec1", cfg.sec1);
        cfg.sec2 = f.value("sec2", cfg.sec2);
        cfg.pec4 = f.value("4pec", cfg.pec4);
        cfg.pec = f.value("pec", cfg.pec);
        cfg.comb = f.value("comb", cfg.comb);
        cfg.tcomb = f.value("tcomb", cfg.tcomb);
    }
    return cfg;
}

int load_from_text(const std::string& text, int depots, gmdtsp_instance** out, char* err,
                   size_t errlen) {
    return guarded(err, errlen, [&] {
        RawGtspInstance raw = parse_instance(text);
        auto* handle = new gmdtsp_instance{derive_gmdtsp(raw, depots)};
        *out = handle;
        return GMDTSP_OK;
    });
}

}  // namespace

int gmdtsp_load(const char* path, int depots, gmdtsp_instance** out, char* err, size_t errlen) {
    std::ifstream f(path);
    if (!f) {
        put_error(err, errlen, std::string("cannot open file: ") + path);
        return GMDTSP_ERROR;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_from_text(ss.str(), depots, out, err, errlen);
}

int gmdtsp_load_text(const char* text, int depots, gmdtsp_instance** out, char* err,
                     size_t errlen) {
    return load_from_text(text ? text : "", depots, out, err, errlen);
}

void gmdtsp_instance_free(gmdtsp_instance* inst) { delete inst; }

const char* gmdtsp_instance_name(const gmdtsp_instance* inst) { return inst->inst.name.c_str(); }
int gmdtsp_instance_depots(const gmdtsp_instance* inst) { return inst->inst.num_depots; }
int gmdtsp_instance_targets(const gmdtsp_instance* inst) { return inst->inst.num_targets; }
int gmdtsp_instance_clusters(const gmdtsp_instance* inst) { return inst->inst.num_clusters(); }
int gmdtsp_instance_triangle(const gmdtsp_instance* inst) {
    return inst->inst.triangle ? 1 : 0;
}

int gmdtsp_reduce(const gmdtsp_instance* inst, gmdtsp_instance** out, char* err, size_t errlen) {
    return guarded(err, errlen, [&] {
        auto [reduced, log] = reduce(inst->inst);
        *out = new gmdtsp_instance{std::move(reduced)};
        return GMDTSP_OK;
    });
}

int gmdtsp_solve(const gmdtsp_instance* inst, const char* config_json, gmdtsp_result** out,
                 char* err, size_t errlen) {
    return guarded(err, errlen, [&] {
        SolverConfig cfg = config_from_json(config_json);
        SolveOutput so = solve(inst->inst, cfg);
        auto* res = new gmdtsp_result;
        res->cost = so.best ? so.best->cost : -1;
        res->optimal = so.status == SolveStatus::Optimal;
        res->json = run_report_json(inst->inst, so, cfg);
        *out = res;
        return res->optimal ? GMDTSP_OK : GMDTSP_TIME_LIMIT;
    });
}

int gmdtsp_oracle(const gmdtsp_instance* inst, gmdtsp_result** out, char* err, size_t errlen) {
    return guarded(err, errlen, [&] {
        IntegerSolution sol = oracle_solution(inst->inst);
        auto* res = new gmdtsp_result;
        res->cost = sol.cost;
        res->optimal = true;
        res->json = solution_to_json(inst->inst, sol);
        *out = res;
        return GMDTSP_OK;
    });
}

int gmdtsp_validate(const gmdtsp_instance* inst, const char* solution_json, char* err,
                    size_t errlen) {
    return guarded(err, errlen, [&] {
        std::vector<Cycle> cycles = cycles_from_json(inst->inst, solution_json ? solution_json : "");
        VariableMap vm{inst->inst.num_targets, inst->inst.num_depots};
        std::vector<int> x, y;
        vectors_from_cycles(inst->inst, vm, cycles, x, y);
        auto verdict = check_feasible(inst->inst, x, y);
        if (std::holds_alternative<FeasibilityViolation>(verdict)) {
            put_error(err, errlen, std::get<FeasibilityViolation>(verdict).message);
            return GMDTSP_ERROR;
        }
        nlohmann::json doc = nlohmann::json::parse(solution_json);
        if (doc.contains("cost")) {
            int64_t claimed = doc["cost"].get<int64_t>();
            int64_t actual = std::get<IntegerSolution>(verdict).cost;
            if (claimed != actual) {
                put_error(err, errlen,
                          "cost mismatch: document says " + std::to_string(claimed) +
                              ", edges sum to " + std::to_string(actual));
                return GMDTSP_ERROR;
            }
        }
        return GMDTSP_OK;
    });
}

int gmdtsp_aggregate_reports(const char* const* report_jsons, size_t count, int table, char** out,
                             char* err, size_t errlen) {
    return guarded(err, errlen, [&] {
        std::vector<std::string> docs;
        for (size_t i = 0; i < count; ++i) docs.emplace_back(report_jsons[i]);
        std::string csv = table == 0 ? reports_to_results_csv(docs) : reports_to_times_csv(docs);
        *out = strdup(csv.c_str());
        return GMDTSP_OK;
    });
}

void gmdtsp_string_free(char* s) { std::free(s); }

long long gmdtsp_result_cost(const gmdtsp_result* res) { return res->cost; }
int gmdtsp_result_optimal(const gmdtsp_result* res) { return res->optimal ? 1 : 0; }
const char* gmdtsp_result_json(const gmdtsp_result* res) { return res->json.c_str(); }
void gmdtsp_result_free(gmdtsp_result* res) { delete res; }
