/* C interface to the GMDTSP branch-and-cut solver.
 *
 * All functions return GMDTSP_OK on success. On GMDTSP_ERROR a message is
 * written to the caller-supplied buffer when one is given. Handles are opaque
 * and must be released with the matching _free function. Handles are not
 * shared between threads; distinct handles may be used concurrently.
 */
#ifndef GMDTSP_H
#define GMDTSP_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define GMDTSP_OK 0
#define GMDTSP_ERROR 1
#define GMDTSP_TIME_LIMIT 2

typedef struct gmdtsp_instance gmdtsp_instance;
typedef struct gmdtsp_result gmdtsp_result;

/* Parses a GTSP-lib file and derives the multi-depot instance with the first
 * `depots` vertices as depots. */
int gmdtsp_load(const char* path, int depots, gmdtsp_instance** out, char* err, size_t errlen);

/* As gmdtsp_load but from an in-memory file body. */
int gmdtsp_load_text(const char* text, int depots, gmdtsp_instance** out, char* err,
                     size_t errlen);

void gmdtsp_instance_free(gmdtsp_instance* inst);

const char* gmdtsp_instance_name(const gmdtsp_instance* inst);
int gmdtsp_instance_depots(const gmdtsp_instance* inst);
int gmdtsp_instance_targets(const gmdtsp_instance* inst);
int gmdtsp_instance_clusters(const gmdtsp_instance* inst);
int gmdtsp_instance_triangle(const gmdtsp_instance* inst);

/* Dominated-target reduction; the reduced instance is a new handle. Returns
 * the input unchanged (as a copy) when the costs are not metric. */
int gmdtsp_reduce(const gmdtsp_instance* inst, gmdtsp_instance** out, char* err, size_t errlen);

/* Runs the branch-and-cut solver. `config_json` may be NULL or a JSON object;
 * recognized keys: time_limit_s, preprocess, threads, all_families_per_round,
 * max_cuts_per_class, sb_candidates, sb_probe_pivots, heuristic_period,
 * eps_cut, eps_int, seed, families.{sec1,sec2,4pec,pec,comb,tcomb},
 * dump_lp_path. Returns GMDTSP_TIME_LIMIT when the limit was hit; a result
 * with the best bound and incumbent is still produced. */
int gmdtsp_solve(const gmdtsp_instance* inst, const char* config_json, gmdtsp_result** out,
                 char* err, size_t errlen);

/* Exhaustive optimum for small instances (at most 10 targets). */
int gmdtsp_oracle(const gmdtsp_instance* inst, gmdtsp_result** out, char* err, size_t errlen);

/* Feasibility check of a solution document {cost, cycles:[{depot,targets}]}
 * against the instance. GMDTSP_OK means feasible with matching cost. */
int gmdtsp_validate(const gmdtsp_instance* inst, const char* solution_json, char* err,
                    size_t errlen);

/* Aggregates per-run report documents into one CSV table: table 0 holds
 * {name,opt,LB,%LB,UB,%UB,sec1,sec2,4pec,pec,comb,nodes}, table 1 holds
 * {name,total-t,sep-t,sec-t,4pec-t,pec-t,comb-t,%pec}. The returned string
 * must be released with gmdtsp_string_free. */
int gmdtsp_aggregate_reports(const char* const* report_jsons, size_t count, int table, char** out,
                             char* err, size_t errlen);

void gmdtsp_string_free(char* s);

/* Cost of the result's best solution, or -1 when none was found. */
long long gmdtsp_result_cost(const gmdtsp_result* res);

/* 1 when the solve finished proving optimality. */
int gmdtsp_result_optimal(const gmdtsp_result* res);

/* Full run report (solve) or a {cost, cycles} document (oracle). The string
 * lives as long as the result handle. */
const char* gmdtsp_result_json(const gmdtsp_result* res);

void gmdtsp_result_free(gmdtsp_result* res);

#ifdef __cplusplus
}
#endif

#endif /* GMDTSP_H */
