/* C interface to the sph library: parsing, source-to-source
 * transformation, wrapper generation, interpretation, value diffing and
 * the native kernel benchmark.
 *
 * Conventions: every function returns sph_status; results come back
 * through out-parameters. Strings returned by the library are
 * NUL-terminated, heap-allocated, and must be released with
 * sph_string_free. On failure, *error_out (when present) receives a
 * message the caller must also free.
 */
#ifndef SPH_H
#define SPH_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sph_status {
  SPH_OK = 0,
  SPH_ERR_USAGE = 1,
  SPH_ERR_PARSE = 2,
  SPH_ERR_TRANSFORM = 3,
  SPH_ERR_RUNTIME = 4,
  SPH_ERR_DIFF = 5
} sph_status;

typedef struct sph_program sph_program;
typedef struct sph_value sph_value;

const char* sph_version(void);

void sph_string_free(char* s);

/* --- programs -------------------------------------------------------- */

sph_status sph_parse(const char* source, sph_program** program_out,
                     char** error_out);
void sph_program_free(sph_program* p);

sph_status sph_pretty_print(const sph_program* p, char** text_out,
                            char** error_out);

/* Rewrites algebraic assignments to self-mutating form. report_json_out
 * describes rule applications and temporaries; warning_count_out is the
 * number of statements left untouched for want of a mutating form. */
sph_status sph_transform(const sph_program* p, sph_program** program_out,
                         char** report_json_out, int* warning_count_out,
                         char** error_out);

/* Generates pure wrapper procedures for every declared mutating form. */
sph_status sph_wrappers(const sph_program* p, sph_program** program_out,
                        char** error_out);

/* --- values ---------------------------------------------------------- */

sph_status sph_value_parse(const char* text, sph_value** value_out,
                           char** error_out);
void sph_value_free(sph_value* v);

sph_status sph_value_format(const sph_value* v, char** text_out,
                            char** error_out);

/* SPH_OK when bitwise equal, SPH_ERR_DIFF with a description otherwise. */
sph_status sph_value_diff(const sph_value* a, const sph_value* b,
                          char** description_out);

/* --- interpretation --------------------------------------------------- */

/* Runs proc_name against named inputs. Outputs are the final values of
 * the updated parameters (plus "return" for a returning procedure), in
 * parallel arrays the caller frees with sph_outputs_free. alloc_json_out
 * reports mesh allocation activity of the body. */
sph_status sph_interpret(const sph_program* p, const char* proc_name,
                         const char* const* input_names,
                         const sph_value* const* input_values, int input_count,
                         char*** output_names_out, sph_value*** output_values_out,
                         int* output_count_out, char** alloc_json_out,
                         char** error_out);

void sph_outputs_free(char** names, sph_value** values, int count);

/* --- benchmark --------------------------------------------------------- */

/* Times the algebraic vs self-mutating quadratic update kernel.
 * sizes_csv lists cubic edge lengths, e.g. "8,64". Pass 0 for
 * total_updates or repetitions to use the defaults (16777216 and 5). */
sph_status sph_bench(const char* sizes_csv, uint64_t total_updates,
                     int repetitions, int use_double, uint64_t seed,
                     char** table_out, char** json_out, char** error_out);

#ifdef __cplusplus
}
#endif

#endif /* SPH_H */
