/*
 * rankdec - rank-metric decoding toolkit for Gabidulin codes
 *
 * C interface to the shared library. All structured data crosses the
 * boundary as JSON text; returned strings are heap-allocated and must be
 * released with rd_string_free(). Extension-field values are arrays of m
 * base-field digits, constant coefficient first.
 */
#ifndef RANKDEC_H
#define RANKDEC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rd_status {
  RD_OK = 0,
  RD_DECODE_FAILURE = 1,  /* the decoder gave up; not a fault */
  RD_INVALID_ARGUMENT = 2,
  RD_PARSE_ERROR = 3,
  RD_CAP_EXCEEDED = 4,
  RD_INTERNAL_ERROR = 5
} rd_status;

const char* rd_version(void);

/* Message for the most recent failure on this thread. */
const char* rd_last_error(void);

void rd_string_free(char* s);

/*
 * Work-factor analysis.
 * params_json: {"q":2,"m":24,"n":24,"k":16,"w":6}
 * options_json (optional, may be NULL): {"poly_factor":true}
 * Returns the report JSON, or NULL with rd_last_error() set.
 */
char* rd_analyze_json(const char* params_json, const char* options_json);

/*
 * Monte Carlo simulation of the randomized decoder.
 * config_json: {"q":..,"m":..,"n":..,"k":..,"w":..,
 *               "delta":4 | -1 for auto, "trials":1000000,
 *               "seed":1, "workers":8, "mode":"per-guess"|"geometric",
 *               "max_iter":0}
 */
char* rd_simulate_json(const char* config_json);

/* Fresh random instance: {"q","m","n","k","w","seed"} -> instance JSON. */
char* rd_make_instance_json(const char* params_json);

/*
 * Decode an instance. options_json (may be NULL):
 *   {"w":6, "delta":4 | -1, "max_iter":0, "seed":1}
 * Returns the outcome JSON; *status is RD_OK when a codeword within the
 * radius was found, RD_DECODE_FAILURE when the decoder exhausted its budget.
 */
char* rd_decode_json(const char* instance_json, const char* options_json, rd_status* status);

/*
 * Oracle self-tests. level: 0 = fast, 1 = full (includes the 1e5-draw
 * uniformity suites). inject_failure != 0 deliberately breaks one check.
 * Returns the number of failed checks, or -1 on setup error; *report_json
 * (optional) receives one line per check.
 */
int rd_selftest(int level, int inject_failure, char** report_json);

/* --- opaque code handles -------------------------------------------------- */

typedef struct rd_code rd_code;

/* instance JSON or {"q","m","n","k"} (+optional "modulus","g","seed") */
rd_code* rd_code_create_json(const char* json_text);
void rd_code_destroy(rd_code* code);

int rd_code_length(const rd_code* code);
int rd_code_dimension(const rd_code* code);

/* message digits [[..m digits..] x k] -> codeword JSON [[..] x n] */
char* rd_code_encode_json(const rd_code* code, const char* message_json);

/*
 * request: {"r": [[..] x n], "w":6, "delta":4 | -1, "max_iter":0, "seed":1}
 */
char* rd_code_decode_json(const rd_code* code, const char* request_json, rd_status* status);

/* request: {"r": [[..] x n], "w":4, "cap":16777216} -> list of codewords */
char* rd_code_list_close_json(const rd_code* code, const char* request_json);

#ifdef __cplusplus
}
#endif

#endif /* RANKDEC_H */
