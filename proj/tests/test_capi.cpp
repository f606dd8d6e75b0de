/* Exercises the shared library through the C interface alone: no C++ headers,
 * no internal symbols. Compile-linked against libsixpp only. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "sixpp.h"

static int failures = 0;

#define CHECK(cond)                                                        \
    do {                                                                   \
        if (!(cond)) {                                                     \
            ++failures;                                                    \
            fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond); \
        }                                                                  \
    } while (0)

static const char* kScenarioText =
    "[run]\n"
    "duration_us = 20000000\n"
    "[topology]\n"
    "kind = line\n"
    "n = 4\n"
    "prr = 1.0\n"
    "[ct]\n"
    "n_h = 6\n"
    "[rpl]\n"
    "dio_period_us = 1000000\n"
    "dao_jitter_us = 500000\n"
    "[drift]\n"
    "mode = none\n"
    "[app]\n"
    "enabled = true\n"
    "period_us = 5000000\n"
    "start_us = 10000000\n";

static void test_version(void) {
    const char* v = sixpp_version();
    CHECK(v != NULL);
    CHECK(strlen(v) > 0);
}

static void test_capacity(void) {
    uint64_t messages = 0, t_slot = 0;
    CHECK(sixpp_capacity_messages("LE_2M", 10000, 64, 2, 3, 40, 6, &messages, &t_slot) ==
          SIXPP_OK);
    CHECK(messages == 6);
    CHECK(t_slot == 320);
    CHECK(sixpp_capacity_messages("LE_CODED_125K", 10000, 64, 2, 3, 40, 6, &messages, NULL) ==
          SIXPP_OK);
    CHECK(messages == 0);

    CHECK(sixpp_capacity_messages("LE_4M", 10000, 64, 2, 3, 40, 6, &messages, NULL) ==
          SIXPP_ERR_USAGE);
    CHECK(strstr(sixpp_last_error(), "LE_4M") != NULL);
    CHECK(sixpp_capacity_messages("LE_2M", 10000, 64, 2, 3, 40, 6, NULL, NULL) ==
          SIXPP_ERR_USAGE);
    CHECK(sixpp_capacity_messages("LE_2M", 0, 64, 2, 3, 40, 6, &messages, NULL) ==
          SIXPP_ERR_USAGE);

    sixpp_capacity_table* table = NULL;
    CHECK(sixpp_capacity_sweep(NULL, 0, 10000, 64, 1, 2, 1, 4, 40, 6, &table) == SIXPP_OK);
    CHECK(table != NULL);
    CHECK(sixpp_capacity_row_count(table) == 5 * 2 * 4);

    sixpp_capacity_row_data row;
    CHECK(sixpp_capacity_row(table, 0, &row) == SIXPP_OK);
    CHECK(strcmp(row.phy, "LE_2M") == 0);
    CHECK(row.n_tx == 1);
    CHECK(row.n_h == 1);
    CHECK(row.t_slot_us == 320);
    CHECK(sixpp_capacity_row(table, 5 * 2 * 4, &row) == SIXPP_ERR_USAGE);

    char* csv = NULL;
    CHECK(sixpp_capacity_csv(table, 3, &csv) == SIXPP_OK);
    CHECK(csv != NULL);
    CHECK(strncmp(csv, "# config=", 9) == 0);
    CHECK(strstr(csv, "phy,n_tx,n_h,payload_bytes,t_slot_us,messages\n") != NULL);
    sixpp_string_free(csv);
    sixpp_capacity_free(table);

    const char* one_phy[] = {"IEEE802154_250K"};
    CHECK(sixpp_capacity_sweep(one_phy, 1, 10000, 64, 2, 2, 1, 16, 40, 6, &table) == SIXPP_OK);
    CHECK(sixpp_capacity_row_count(table) == 16);
    sixpp_capacity_free(table);

    const char* bad_phy[] = {"FM_RADIO"};
    CHECK(sixpp_capacity_sweep(bad_phy, 1, 10000, 64, 1, 1, 1, 1, 40, 6, &table) ==
          SIXPP_ERR_USAGE);
    CHECK(sixpp_capacity_sweep(NULL, 0, 10000, 64, 2, 1, 1, 1, 40, 6, &table) ==
          SIXPP_ERR_USAGE);
}

static void test_scenario_handling(void) {
    sixpp_scenario* scenario = NULL;
    CHECK(sixpp_scenario_parse(kScenarioText, &scenario) == SIXPP_OK);
    CHECK(scenario != NULL);
    CHECK(sixpp_scenario_validate(scenario) == SIXPP_OK);

    uint64_t h0 = sixpp_scenario_config_hash(scenario);
    CHECK(h0 != 0);
    CHECK(sixpp_scenario_set(scenario, "run.mode", "baseline") == SIXPP_OK);
    CHECK(sixpp_scenario_config_hash(scenario) != h0);

    char* text = NULL;
    CHECK(sixpp_scenario_serialize(scenario, &text) == SIXPP_OK);
    CHECK(strstr(text, "mode = baseline") != NULL);
    CHECK(strstr(text, "n = 4") != NULL);
    sixpp_string_free(text);

    CHECK(sixpp_scenario_set(scenario, "run.mode", "warp") == SIXPP_ERR_SCENARIO);
    CHECK(sixpp_scenario_set(scenario, "nodot", "1") == SIXPP_ERR_SCENARIO);
    CHECK(sixpp_scenario_set(scenario, NULL, "1") == SIXPP_ERR_USAGE);

    /* Validation failures surface as scenario errors with a message. A hop
     * budget this large leaves no shared slots in the 101-slot frame. */
    CHECK(sixpp_scenario_set(scenario, "ct.n_h", "100000") == SIXPP_OK);
    CHECK(sixpp_scenario_validate(scenario) == SIXPP_ERR_SCENARIO);
    CHECK(strlen(sixpp_last_error()) > 0);
    sixpp_scenario_free(scenario);

    CHECK(sixpp_scenario_parse("[run]\nseed = banana\n", &scenario) == SIXPP_ERR_SCENARIO);
    CHECK(strstr(sixpp_last_error(), "line 2") != NULL);
    CHECK(sixpp_scenario_parse(NULL, &scenario) == SIXPP_ERR_USAGE);
}

static void test_scenario_files(void) {
    sixpp_scenario* scenario = NULL;
    CHECK(sixpp_scenario_load("no_such_scenario_file.scn", &scenario) == SIXPP_ERR_IO);
    CHECK(strstr(sixpp_last_error(), "no_such_scenario_file.scn") != NULL);

    const char* path = "capi_scratch.scn";
    FILE* f = fopen(path, "w");
    CHECK(f != NULL);
    if (f != NULL) {
        fputs(kScenarioText, f);
        fclose(f);
        CHECK(sixpp_scenario_load(path, &scenario) == SIXPP_OK);
        CHECK(sixpp_scenario_validate(scenario) == SIXPP_OK);
        sixpp_scenario_free(scenario);
        remove(path);
    }
}

static void test_run(void) {
    sixpp_scenario* scenario = NULL;
    CHECK(sixpp_scenario_parse(kScenarioText, &scenario) == SIXPP_OK);

    sixpp_run_result* result = NULL;
    CHECK(sixpp_run(scenario, &result) == SIXPP_OK);
    CHECK(result != NULL);

    sixpp_run_stats stats;
    CHECK(sixpp_result_stats(result, &stats) == SIXPP_OK);
    CHECK(stats.expected > 0);
    CHECK(stats.delivered == stats.expected);
    CHECK(stats.reliability_pct == 100.0);
    CHECK(stats.mean_latency_ms > 0.0);
    CHECK(stats.eb_unicast == 0); /* flood mode has no unicast beacons */
    CHECK(stats.ka == 0);
    CHECK(stats.eb_flood > 0);
    CHECK(stats.data_flood > 0);
    CHECK(stats.desyncs == 0);

    CHECK(sixpp_result_node_count(result) == 4);
    sixpp_node_stats node;
    CHECK(sixpp_result_node_stats(result, 3, &node) == SIXPP_OK);
    CHECK(node.node == 3);
    CHECK(node.hops == 3);
    CHECK(node.has_assoc_latency == 1);
    CHECK(node.has_dao_delta == 1);
    CHECK(sixpp_result_node_stats(result, 4, &node) == SIXPP_ERR_USAGE);

    char* line = NULL;
    CHECK(sixpp_result_summary_line(result, &line) == SIXPP_OK);
    CHECK(strstr(line, "sixpp") != NULL);
    sixpp_string_free(line);

    char* events = NULL;
    CHECK(sixpp_result_events_csv(result, &events) == SIXPP_OK);
    CHECK(strncmp(events, "# config=", 9) == 0);
    CHECK(strstr(events, "t_us,node,event,detail\n") != NULL);
    CHECK(strstr(events, ",assoc,") != NULL);

    /* The same scenario reproduces the identical event log. */
    sixpp_run_result* again = NULL;
    CHECK(sixpp_run(scenario, &again) == SIXPP_OK);
    char* events2 = NULL;
    CHECK(sixpp_result_events_csv(again, &events2) == SIXPP_OK);
    CHECK(strcmp(events, events2) == 0);
    sixpp_string_free(events);
    sixpp_string_free(events2);
    sixpp_result_free(again);

    char* summary = NULL;
    CHECK(sixpp_result_summary_csv(result, &summary) == SIXPP_OK);
    CHECK(strstr(summary, "node,hops,assoc_latency_us") != NULL);
    sixpp_string_free(summary);

    char* floods = NULL;
    CHECK(sixpp_result_floods_csv(result, &floods) == SIXPP_OK);
    CHECK(strstr(floods, "flood_idx,node,reached") != NULL);
    sixpp_string_free(floods);

    sixpp_result_free(result);

    /* Invalid scenarios never start running. */
    CHECK(sixpp_scenario_set(scenario, "slotframe.total_slots", "1") == SIXPP_OK);
    CHECK(sixpp_run(scenario, &result) == SIXPP_ERR_SCENARIO);
    sixpp_scenario_free(scenario);
    CHECK(sixpp_run(NULL, &result) == SIXPP_ERR_USAGE);
}

static void test_matrix(void) {
    sixpp_scenario* scenario = NULL;
    CHECK(sixpp_scenario_parse(kScenarioText, &scenario) == SIXPP_OK);

    uint64_t seeds[] = {1, 2};
    sixpp_matrix_result* matrix = NULL;
    CHECK(sixpp_matrix(scenario, seeds, 2, 2, &matrix) == SIXPP_OK);
    CHECK(sixpp_matrix_cell_count(matrix) == 8);

    sixpp_matrix_cell_data cell;
    CHECK(sixpp_matrix_cell(matrix, 0, &cell) == SIXPP_OK);
    CHECK(strcmp(cell.mode, "baseline") == 0);
    CHECK(cell.jam == 0);
    CHECK(cell.seed == 1);
    CHECK(sixpp_matrix_cell(matrix, 7, &cell) == SIXPP_OK);
    CHECK(strcmp(cell.mode, "sixpp") == 0);
    CHECK(cell.jam == 1);
    CHECK(cell.seed == 2);
    CHECK(sixpp_matrix_cell(matrix, 8, &cell) == SIXPP_ERR_USAGE);

    char* csv = NULL;
    CHECK(sixpp_matrix_csv(matrix, &csv) == SIXPP_OK);
    CHECK(strstr(csv, "mode,jam,seed,reliability_pct,mean_latency_ms,median_latency_ms\n") !=
          NULL);
    sixpp_string_free(csv);
    sixpp_matrix_free(matrix);

    CHECK(sixpp_matrix(scenario, NULL, 0, 1, &matrix) == SIXPP_ERR_USAGE);
    sixpp_scenario_free(scenario);
}

int main(void) {
    test_version();
    test_capacity();
    test_scenario_handling();
    test_scenario_files();
    test_run();
    test_matrix();
    if (failures != 0) {
        fprintf(stderr, "%d C API check(s) failed\n", failures);
        return 1;
    }
    printf("all C API checks passed\n");
    return 0;
}
