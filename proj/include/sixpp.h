#ifndef SIXPP_H
#define SIXPP_H

/* C interface of the TSCH + concurrent-transmission flood simulator.
 * Every object is an opaque handle created and destroyed here; every call
 * returns a status code and leaves a message for sixpp_last_error() on
 * failure. Strings returned through char** are heap-allocated and must be
 * released with sixpp_string_free(). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sixpp_status {
    SIXPP_OK = 0,
    SIXPP_ERR_USAGE = 2,    /* bad arguments: null handle, unknown name, bad range */
    SIXPP_ERR_SCENARIO = 3, /* scenario parse or validation failure */
    SIXPP_ERR_IO = 4,       /* file system failure */
    SIXPP_ERR_INTERNAL = 5,
} sixpp_status;

typedef struct sixpp_scenario sixpp_scenario;
typedef struct sixpp_run_result sixpp_run_result;
typedef struct sixpp_capacity_table sixpp_capacity_table;
typedef struct sixpp_matrix_result sixpp_matrix_result;

const char* sixpp_version(void);

/* Message of the most recent failing call on this thread; empty string if
 * none. The pointer stays valid until the next failing call. */
const char* sixpp_last_error(void);

void sixpp_string_free(char* s);

/* ---- capacity ---------------------------------------------------------- */

typedef struct sixpp_capacity_row_data {
    const char* phy; /* static storage, do not free */
    unsigned n_tx;
    unsigned n_h;
    unsigned payload_bytes;
    uint64_t t_slot_us;
    uint64_t messages;
} sixpp_capacity_row_data;

/* Messages per slotframe for one parameter set. out_t_slot_us may be NULL. */
sixpp_status sixpp_capacity_messages(const char* phy_name, uint64_t t_sf_us,
                                     unsigned payload_bytes, unsigned n_tx, unsigned n_h,
                                     uint64_t ramp_up_us, unsigned overhead_bytes,
                                     uint64_t* out_messages, uint64_t* out_t_slot_us);

/* Sweep over phys x n_tx x n_h. phy_names == NULL or n_phys == 0 means all
 * known PHYs. Bounds are inclusive. */
sixpp_status sixpp_capacity_sweep(const char* const* phy_names, size_t n_phys, uint64_t t_sf_us,
                                  unsigned payload_bytes, unsigned n_tx_lo, unsigned n_tx_hi,
                                  unsigned n_h_lo, unsigned n_h_hi, uint64_t ramp_up_us,
                                  unsigned overhead_bytes, sixpp_capacity_table** out);

size_t sixpp_capacity_row_count(const sixpp_capacity_table* table);
sixpp_status sixpp_capacity_row(const sixpp_capacity_table* table, size_t index,
                                sixpp_capacity_row_data* out);
sixpp_status sixpp_capacity_csv(const sixpp_capacity_table* table, uint64_t seed, char** out_csv);
void sixpp_capacity_free(sixpp_capacity_table* table);

/* ---- scenario ---------------------------------------------------------- */

sixpp_status sixpp_scenario_parse(const char* text, sixpp_scenario** out);
sixpp_status sixpp_scenario_load(const char* path, sixpp_scenario** out);

/* Override one value, addressed as "section.key", value syntax as in the
 * file (e.g. "run.mode", "sixpp"). */
sixpp_status sixpp_scenario_set(sixpp_scenario* scenario, const char* dotted_key,
                                const char* value);

sixpp_status sixpp_scenario_validate(const sixpp_scenario* scenario);
sixpp_status sixpp_scenario_serialize(const sixpp_scenario* scenario, char** out_text);
uint64_t sixpp_scenario_config_hash(const sixpp_scenario* scenario);
void sixpp_scenario_free(sixpp_scenario* scenario);

/* ---- single run -------------------------------------------------------- */

typedef struct sixpp_run_stats {
    double reliability_pct;
    double mean_latency_ms;   /* over delivered messages; 0 when none */
    double median_latency_ms;
    double p95_latency_ms;
    uint64_t delivered;
    uint64_t expected;
    uint64_t desyncs;
    uint64_t max_sync_error_us;
    uint64_t eb_unicast;
    uint64_t ka;
    uint64_t dio;
    uint64_t dao;
    uint64_t dao_retx;
    uint64_t dao_ack_unicast;
    uint64_t data_unicast;
    uint64_t eb_flood;
    uint64_t dao_ack_flood;
    uint64_t data_flood;
    uint64_t collisions;
    uint64_t drops;
} sixpp_run_stats;

typedef struct sixpp_node_stats {
    uint16_t node;
    unsigned hops;
    int has_assoc_latency;
    uint64_t assoc_latency_us;
    int has_dao_delta;
    uint64_t dao_delta_us;
    uint64_t data_delivered;
    uint64_t data_lost;
    uint64_t desyncs;
    uint64_t max_sync_error_us;
} sixpp_node_stats;

/* Validates, then runs the scenario to completion. */
sixpp_status sixpp_run(const sixpp_scenario* scenario, sixpp_run_result** out);

sixpp_status sixpp_result_stats(const sixpp_run_result* result, sixpp_run_stats* out);
size_t sixpp_result_node_count(const sixpp_run_result* result);
sixpp_status sixpp_result_node_stats(const sixpp_run_result* result, size_t index,
                                     sixpp_node_stats* out);
sixpp_status sixpp_result_summary_line(const sixpp_run_result* result, char** out_line);
sixpp_status sixpp_result_events_csv(const sixpp_run_result* result, char** out_csv);
sixpp_status sixpp_result_summary_csv(const sixpp_run_result* result, char** out_csv);
sixpp_status sixpp_result_floods_csv(const sixpp_run_result* result, char** out_csv);
void sixpp_result_free(sixpp_run_result* result);

/* ---- matrix ------------------------------------------------------------ */

typedef struct sixpp_matrix_cell_data {
    const char* mode; /* static storage, do not free */
    int jam;
    uint64_t seed;
    double reliability_pct;
    double mean_latency_ms;
    double median_latency_ms;
} sixpp_matrix_cell_data;

/* Runs {baseline, sixpp} x {jam off, on} x seeds. max_workers == 0 picks the
 * hardware concurrency; results are deterministic either way. */
sixpp_status sixpp_matrix(const sixpp_scenario* scenario, const uint64_t* seeds, size_t n_seeds,
                          unsigned max_workers, sixpp_matrix_result** out);

size_t sixpp_matrix_cell_count(const sixpp_matrix_result* result);
sixpp_status sixpp_matrix_cell(const sixpp_matrix_result* result, size_t index,
                               sixpp_matrix_cell_data* out);
sixpp_status sixpp_matrix_csv(const sixpp_matrix_result* result, char** out_csv);
void sixpp_matrix_free(sixpp_matrix_result* result);

#ifdef __cplusplus
}
#endif

#endif /* SIXPP_H */
