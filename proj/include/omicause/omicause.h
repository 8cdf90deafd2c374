#ifndef OMICAUSE_OMICAUSE_H
#define OMICAUSE_OMICAUSE_H

/* C interface to the omicause causal-discovery toolkit.
 *
 * Every function returns an omc_status. On failure omc_last_error() describes
 * the cause (thread-local, valid until the next call on the same thread).
 * Strings returned through char** out-parameters are owned by the caller and
 * released with omc_string_free. Structured options and results are JSON
 * text. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define OMC_API __declspec(dllexport)
#else
#define OMC_API __attribute__((visibility("default")))
#endif

typedef enum omc_status {
    OMC_OK = 0,
    OMC_ERR_INVALID_ARGUMENT = 1,
    OMC_ERR_IO = 2,
    OMC_ERR_DATA = 3,
    OMC_ERR_GRAPH = 4,
    OMC_ERR_INTERNAL = 5
} omc_status;

typedef struct omc_table omc_table;
typedef struct omc_graph omc_graph;

OMC_API const char* omc_version(void);
OMC_API const char* omc_last_error(void);
OMC_API const char* omc_status_name(omc_status status);
OMC_API void omc_string_free(char* s);

/* Tables */

/* target may be NULL or "" for no target. kinds_json is NULL or an object
 * {"column": "continuous" | "categorical"}. report_json (optional) receives
 * {rows_read, rows_dropped, warnings}. */
OMC_API omc_status omc_table_load_csv(const char* path, const char* target, const char* kinds_json,
                                      omc_table** out, char** report_json);
OMC_API void omc_table_free(omc_table* table);

/* {rows, target, columns: [{name, kind, cardinality, family, levels}]} */
OMC_API omc_status omc_table_info_json(const omc_table* table, char** out);

/* Summary of one column; split_by_target != 0 adds per-target-level figures. */
OMC_API omc_status omc_table_summary_json(const omc_table* table, const char* column, int split_by_target,
                                          char** out);

OMC_API omc_status omc_table_write_csv(const omc_table* table, const char* path);

/* names_json: array of column names, in the wanted order. */
OMC_API omc_status omc_table_select(const omc_table* table, const char* names_json, omc_table** out);

/* Feature selection. options_json:
 *   {"method": "mi" | "mmmb", "target": name, "max_features": 10,
 *    "test": "chi-square", "alpha": 0.05, "max_cond_set_size": 3 | null,
 *    "neighbors": 3, "seed": 0, "threads": 1}
 * Result: {method, target, alpha_or_k, selected, scores, ...}. */
OMC_API omc_status omc_select_features(const omc_table* table, const char* options_json, char** out);

/* Structure search over all columns. options_json:
 *   {"algorithm": "pc" | "fci" | "ges" | "fges" | "pc_on_skeleton",
 *    "test": "chi-square" | "cg-lrt" | "rcit", "score": "discrete-bic" | "bdeu" | "cg-bic",
 *    "alpha": 0.05, "max_cond_set_size": 3 | null, "stable": true,
 *    "penalty_discount": 1, "ess": 1, "seed": 0, "threads": 1,
 *    "skeleton": <graph JSON, pc_on_skeleton only>}
 * Result: {algorithm, graph, sepsets, score_total, tests_run, score_evaluations, log}. */
OMC_API omc_status omc_discover(const omc_table* table, const char* options_json, char** out);

/* Graphs */

/* Accepts a graph object {nodes, edges} or any object holding one under "graph". */
OMC_API omc_status omc_graph_from_json(const char* json, omc_graph** out);
OMC_API void omc_graph_free(omc_graph* graph);
OMC_API omc_status omc_graph_to_json(const omc_graph* graph, char** out);
OMC_API omc_status omc_graph_to_dot(const omc_graph* graph, char** out);
OMC_API omc_status omc_graph_to_cpdag(const omc_graph* dag, omc_graph** out);

/* Claims for the nodes adjacent to target. table may be NULL, in which case
 * variable families come from the name prefixes. provenance_json is NULL or
 * {algorithm, test_or_score, alpha, graph_file}. */
OMC_API omc_status omc_claims_json(const omc_graph* graph, const omc_table* table, const char* target,
                                   const char* provenance_json, char** out);

/* Synthetic data. spec_json:
 *   {"nodes": 5, "rows": 1000, "seed": 0, "expected_degree": 2 | "edge_density": p,
 *    "type": "discrete" | "cg", "cardinality": 3, "categorical_fraction": 0.0}
 * Either output pointer may be NULL. */
OMC_API omc_status omc_simulate(const char* spec_json, omc_table** table_out, omc_graph** dag_out);

/* Metrics of an estimate against the CPDAG of a true DAG. */
OMC_API omc_status omc_evaluate(const omc_graph* estimated, const omc_graph* truth, char** out);

/* Full pipeline. config_path may be NULL (defaults); overrides_json is NULL
 * or {"section.key": "value", ...}. threads does not change any output. The
 * result is the run report plus "output_dir" and "wall_seconds". */
OMC_API omc_status omc_run_pipeline(const char* config_path, const char* overrides_json, unsigned threads,
                                    char** out);

#ifdef __cplusplus
}
#endif

#endif
