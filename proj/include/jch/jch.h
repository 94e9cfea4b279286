#ifndef JCH_JCH_H
#define JCH_JCH_H

/* Two-site Jaynes-Cummings-Hubbard simulator with a knob qubit.
 *
 * Energies are in units of the resonator-qubit coupling g, times in 1/g.
 * Every function returning jch_status leaves a human-readable message for
 * jch_last_error() on failure. Strings returned by the library stay valid
 * until the owning handle is destroyed (or, for jch_last_error, until the
 * next failing call on the same thread). */

#include <stddef.h>

#if defined(JCH_BUILDING_LIBRARY)
#define JCH_API __attribute__((visibility("default")))
#else
#define JCH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jch_status {
  JCH_OK = 0,
  JCH_ERR_INVALID_ARGUMENT = 1,
  JCH_ERR_DIMENSION_MISMATCH = 2,
  JCH_ERR_NUMERICAL = 3,
  JCH_ERR_IO = 4,
  JCH_ERR_UNKNOWN_KEY = 5,
  JCH_ERR_BAD_VALUE = 6,
  JCH_ERR_INTERNAL = 7
} jch_status;

typedef enum jch_provenance { JCH_PROVENANCE_PAPER = 0, JCH_PROVENANCE_TRIVIAL = 1, JCH_PROVENANCE_DERIVED = 2 } jch_provenance;

typedef enum jch_comparison { JCH_WITHIN = 0, JCH_AT_MOST = 1, JCH_AT_LEAST = 2 } jch_comparison;

typedef struct jch_config jch_config;
typedef struct jch_report jch_report;

typedef struct jch_target {
  const char* key;
  double value;
  double expected;
  double tolerance;
  jch_comparison comparison;
  jch_provenance provenance;
  int passed;
} jch_target;

JCH_API const char* jch_version(void);
JCH_API const char* jch_last_error(void);
JCH_API const char* jch_status_name(jch_status status);

JCH_API size_t jch_scenario_count(void);
JCH_API const char* jch_scenario_name(size_t index);

/* Configuration: scenario defaults overridden by file, then by individual
 * assignments, in call order. */
JCH_API jch_status jch_config_create(const char* scenario, jch_config** out);
JCH_API void jch_config_destroy(jch_config* config);
JCH_API jch_status jch_config_set_scenario(jch_config* config, const char* scenario);
JCH_API jch_status jch_config_load_file(jch_config* config, const char* path);
JCH_API jch_status jch_config_set(jch_config* config, const char* key, const char* value);
JCH_API jch_status jch_config_set_assignment(jch_config* config, const char* key_equals_value);
JCH_API jch_status jch_config_set_output_dir(jch_config* config, const char* dir);
JCH_API jch_status jch_config_get(const jch_config* config, const char* key, double* out);
/* Copies the resolved `key = value` listing into buf (NUL-terminated when
 * capacity allows) and stores the full length in *needed (excluding NUL). */
JCH_API jch_status jch_config_resolved_text(const jch_config* config, char* buf, size_t capacity, size_t* needed);
/* Writes resolved_params.txt into the output directory. */
JCH_API jch_status jch_config_write_resolved(const jch_config* config);

/* Runs the configured scenario. With an output directory set, writes the
 * scenario CSV(s), summary.txt and summary.csv there. */
JCH_API jch_status jch_run(const jch_config* config, jch_report** out);

JCH_API const char* jch_report_scenario(const jch_report* report);
JCH_API size_t jch_report_target_count(const jch_report* report);
JCH_API jch_status jch_report_target(const jch_report* report, size_t index, jch_target* out);
JCH_API jch_status jch_report_find_target(const jch_report* report, const char* key, jch_target* out);
JCH_API size_t jch_report_warning_count(const jch_report* report);
JCH_API const char* jch_report_warning(const jch_report* report, size_t index);
JCH_API size_t jch_report_file_count(const jch_report* report);
JCH_API const char* jch_report_file(const jch_report* report, size_t index);
/* Diagnostic value by key, or NULL when absent. */
JCH_API const char* jch_report_diagnostic(const jch_report* report, const char* key);
JCH_API int jch_report_paper_pass(const jch_report* report);
JCH_API int jch_report_all_pass(const jch_report* report);
JCH_API jch_status jch_report_summary_text(const jch_report* report, char* buf, size_t capacity, size_t* needed);
JCH_API void jch_report_destroy(jch_report* report);

/* Physics entry points using the configuration's resolved parameters. */
JCH_API jch_status jch_repulsion_energy(const jch_config* config, double wprime, double* out);
/* The 16 two-polariton levels of the effective Hamiltonian, ascending. */
JCH_API jch_status jch_two_polariton_levels(const jch_config* config, double* values, size_t capacity, size_t* count);
/* Coefficient of a1^dag a2 in the effective Hamiltonian with the knob ground
 * (knob_excited = 0) or excited (knob_excited != 0). */
JCH_API jch_status jch_effective_hopping(const jch_config* config, int knob_excited, double* out);

#ifdef __cplusplus
}
#endif

#endif
