/* corrcalc — finite category computation engine.
 *
 * C interface to the shared library: opaque handles, integer status codes,
 * JSON strings across the boundary. Strings returned through out-parameters
 * are heap-allocated; release them with corrcalc_string_free.
 */

#ifndef CORRCALC_H
#define CORRCALC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum corrcalc_status {
  CORRCALC_OK = 0,
  CORRCALC_CHECK_FAILED = 1,  /* input well-formed, property fails */
  CORRCALC_PARSE_ERROR = 2,   /* malformed input */
  CORRCALC_INVALID_ARGUMENT = 3,
  CORRCALC_SIZE_CAP = 4,
  CORRCALC_INTERNAL_ERROR = 5
} corrcalc_status;

/* An immutable validated finite category. */
typedef struct corrcalc_cat corrcalc_cat;

const char* corrcalc_version(void);

/* Workers used by internal parallel scans; outputs never depend on it. */
void corrcalc_set_parallelism(unsigned workers);

/* Parse and validate a fincat-v1 document. On failure returns a status and,
 * when err_json is non-null, a JSON error report. */
corrcalc_status corrcalc_cat_parse(const char* json_text, const char* name,
                                   corrcalc_cat** out, char** err_json);
void corrcalc_cat_free(corrcalc_cat* cat);

size_t corrcalc_cat_num_objects(const corrcalc_cat* cat);
size_t corrcalc_cat_num_morphisms(const corrcalc_cat* cat);
corrcalc_status corrcalc_cat_to_json(const corrcalc_cat* cat, char** out_json);
corrcalc_status corrcalc_cat_to_dot(const corrcalc_cat* cat, char** out_dot);
corrcalc_status corrcalc_cat_opposite(const corrcalc_cat* cat, corrcalc_cat** out);

/* Run an engine command. `command` is a CLI subcommand name; `args_json`
 * carries the inputs, e.g.
 *   {"input": <fincat-v1>, "cap": 10000, ...}
 * The report lands in out_json (always set on OK and CHECK_FAILED). */
corrcalc_status corrcalc_run(const char* command, const char* args_json,
                             char** out_json);

void corrcalc_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* CORRCALC_H */
