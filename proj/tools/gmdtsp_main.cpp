// Command-line harness over the gmdtsp C API: solve instances, compute small
// exhaustive optima, validate solution files, and aggregate run reports.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gmdtsp.h"
#include "json.hpp"

namespace {

constexpr size_t kErrLen = 1024;

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct InstanceHandle {
    gmdtsp_instance* h = nullptr;
    ~InstanceHandle() { gmdtsp_instance_free(h); }
};

struct ResultHandle {
    gmdtsp_result* h = nullptr;
    ~ResultHandle() { gmdtsp_result_free(h); }
};

int run_solve(const std::string& file, int depots, double time_limit, bool no_preprocess,
              const std::string& json_out, int threads, const std::string& dump_lp,
              bool all_families) {
    char err[kErrLen] = {0};
    InstanceHandle inst;
    if (gmdtsp_load(file.c_str(), depots, &inst.h, err, kErrLen) != GMDTSP_OK) {
        std::cerr << "error: " << err << "\n";
        return 1;
    }

    nlohmann::json cfg;
    cfg["time_limit_s"] = time_limit;
    cfg["preprocess"] = !no_preprocess;
    if (threads > 0) cfg["threads"] = threads;
    if (!dump_lp.empty()) cfg["dump_lp_path"] = dump_lp;
    if (all_families) cfg["all_families_per_round"] = true;
    std::string cfg_text = cfg.dump();

    ResultHandle res;
    int rc = gmdtsp_solve(inst.h, cfg_text.c_str(), &res.h, err, kErrLen);
    if (rc == GMDTSP_ERROR) {
        std::cerr << "error: " << err << "\n";
        return 1;
    }

    nlohmann::json report = nlohmann::json::parse(gmdtsp_result_json(res.h));
    std::cout << "instance " << report["name"].get<std::string>() << ": "
              << report["status"].get<std::string>();
    if (!report["opt"].is_null()) std::cout << ", cost " << report["opt"].get<long long>();
    std::cout << ", nodes " << report["nodes"].get<long long>() << ", root LB "
              << report["lb"].get<double>() << "\n";
    if (report.contains("solution"))
        for (const auto& cyc : report["solution"]["cycles"]) {
            std::cout << "  " << cyc["depot"].get<int>();
            for (const auto& t : cyc["targets"]) std::cout << " " << t.get<int>();
            std::cout << " " << cyc["depot"].get<int>() << "\n";
        }

    if (!json_out.empty()) {
        std::ofstream f(json_out);
        f << gmdtsp_result_json(res.h) << "\n";
        if (!f) {
            std::cerr << "error: cannot write " << json_out << "\n";
            return 1;
        }
    }
    return rc == GMDTSP_TIME_LIMIT ? 2 : 0;
}

int run_oracle(const std::string& file, int depots) {
    char err[kErrLen] = {0};
    InstanceHandle inst;
    if (gmdtsp_load(file.c_str(), depots, &inst.h, err, kErrLen) != GMDTSP_OK) {
        std::cerr << "error: " << err << "\n";
        return 1;
    }
    if (gmdtsp_instance_targets(inst.h) > 10) {
        std::cerr << "error: oracle is limited to 10 targets ("
                  << gmdtsp_instance_targets(inst.h) << " present)\n";
        return 1;
    }
    ResultHandle res;
    if (gmdtsp_oracle(inst.h, &res.h, err, kErrLen) != GMDTSP_OK) {
        std::cerr << "error: " << err << "\n";
        return 1;
    }
    std::cout << gmdtsp_result_json(res.h) << "\n";
    return 0;
}

int run_validate(const std::string& file, int depots, const std::string& solution) {
    char err[kErrLen] = {0};
    InstanceHandle inst;
    if (gmdtsp_load(file.c_str(), depots, &inst.h, err, kErrLen) != GMDTSP_OK) {
        std::cerr << "error: " << err << "\n";
        return 1;
    }
    std::string doc;
    try {
        doc = read_file(solution);
        // A run report embeds the solution under "solution"; accept both.
        nlohmann::json j = nlohmann::json::parse(doc);
        if (j.contains("solution")) doc = j["solution"].dump();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (gmdtsp_validate(inst.h, doc.c_str(), err, kErrLen) != GMDTSP_OK) {
        std::cerr << "infeasible: " << err << "\n";
        return 1;
    }
    std::cout << "feasible\n";
    return 0;
}

int run_report(const std::string& dir) {
    std::vector<std::string> docs;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        try {
            docs.push_back(read_file(f.string()));
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    if (docs.empty()) {
        std::cerr << "error: no .json reports under " << dir << "\n";
        return 1;
    }
    std::vector<const char*> ptrs;
    for (const auto& d : docs) ptrs.push_back(d.c_str());

    char err[kErrLen] = {0};
    for (int table = 0; table < 2; ++table) {
        char* csv = nullptr;
        if (gmdtsp_aggregate_reports(ptrs.data(), ptrs.size(), table, &csv, err, kErrLen) !=
            GMDTSP_OK) {
            std::cerr << "error: " << err << "\n";
            return 1;
        }
        std::string path = dir + (table == 0 ? "/results.csv" : "/times.csv");
        std::ofstream f(path);
        f << csv;
        gmdtsp_string_free(csv);
        if (!f) {
            std::cerr << "error: cannot write " << path << "\n";
            return 1;
        }
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"branch-and-cut solver for generalized multiple depot traveling salesmen"};
    app.require_subcommand(1);

    std::string file, json_out, solution, dir, dump_lp;
    int depots = 2, threads = 0;
    double time_limit = 7200.0;
    bool no_preprocess = false, all_families = false;

    auto* solve = app.add_subcommand("solve", "solve an instance file");
    solve->add_option("file", file, "GTSP-lib instance file")->required();
    solve->add_option("--depots", depots, "number of depots (first vertices)")->required();
    solve->add_option("--time-limit", time_limit, "time limit in seconds");
    solve->add_flag("--no-preprocess", no_preprocess, "skip the dominated-target reduction");
    solve->add_option("--json", json_out, "write the run report here");
    solve->add_option("--threads", threads, "separation worker threads (or GMDTSP_THREADS)");
    solve->add_option("--dump-lp", dump_lp, "write the final root LP in LP format");
    solve->add_flag("--all-families", all_families, "run every cut family each round");

    auto* oracle = app.add_subcommand("oracle", "exhaustive optimum (at most 10 targets)");
    oracle->add_option("file", file, "GTSP-lib instance file")->required();
    oracle->add_option("--depots", depots, "number of depots")->required();

    auto* validate = app.add_subcommand("validate", "check a solution file");
    validate->add_option("file", file, "GTSP-lib instance file")->required();
    validate->add_option("--depots", depots, "number of depots")->required();
    validate->add_option("--solution", solution, "solution or report JSON")->required();

    auto* report = app.add_subcommand("report", "aggregate run reports into CSV tables");
    report->add_option("dir", dir, "directory holding per-run .json reports")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return run_solve(file, depots, time_limit, no_preprocess, json_out, threads, dump_lp,
                             all_families);
        if (oracle->parsed()) return run_oracle(file, depots);
        if (validate->parsed()) return run_validate(file, depots, solution);
        if (report->parsed()) return run_report(dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
