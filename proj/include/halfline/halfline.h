#ifndef HALFLINE_HALFLINE_H
#define HALFLINE_HALFLINE_H

#include <stddef.h>

#if defined(_WIN32)
#  define HL_API __declspec(dllexport)
#else
#  define HL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum hl_status {
  HL_OK = 0,
  HL_ERR_NUMERICAL = 1,
  HL_ERR_CONFIG = 2
} hl_status;

typedef struct hl_config hl_config;
typedef struct hl_scattering hl_scattering;

HL_API const char* hl_version(void);
HL_API size_t hl_worker_count(void);

/* Last error on the calling thread. The kind is a short identifier such as
   "config", "resolution" or "bound_states_present"; empty when the last call succeeded. */
HL_API const char* hl_last_error(void);
HL_API const char* hl_last_error_kind(void);
/* One-line summary and written files of the last successful run on this thread. */
HL_API const char* hl_last_summary(void);
HL_API size_t hl_last_file_count(void);
HL_API const char* hl_last_file(size_t i);

HL_API hl_status hl_config_load(const char* path, hl_config** out);
HL_API hl_status hl_config_parse(const char* text, hl_config** out);
HL_API void hl_config_free(hl_config* cfg);
HL_API size_t hl_config_warning_count(const hl_config* cfg);
HL_API const char* hl_config_warning(const hl_config* cfg, size_t i);

HL_API hl_status hl_run_scatter(const hl_config* cfg, const char* out_dir);
HL_API hl_status hl_run_evolve(const hl_config* cfg, const char* out_dir);
HL_API hl_status hl_run_verify(const hl_config* cfg, const char* out_dir);
HL_API hl_status hl_run_line(const hl_config* cfg, const char* out_dir);

/* Runs the built-in oracle suite and writes selftest.json into out_dir. */
HL_API hl_status hl_selftest(const char* out_dir, size_t* failed);
HL_API size_t hl_selftest_case_count(void);
HL_API hl_status hl_selftest_case(size_t i, const char** name, int* pass, double* value, double* threshold);

/* Scattering matrix of the configured potential and boundary on the configured k grid. */
HL_API hl_status hl_scattering_create(const hl_config* cfg, hl_scattering** out);
HL_API void hl_scattering_free(hl_scattering* s);
HL_API size_t hl_scattering_dim(const hl_scattering* s);
HL_API const char* hl_scattering_classification(const hl_scattering* s);
HL_API double hl_scattering_unitarity(const hl_scattering* s);
/* S(k) row-major into re[dim*dim], im[dim*dim]; k may be negative. */
HL_API hl_status hl_scattering_at(const hl_scattering* s, double k, double* re, double* im);

#ifdef __cplusplus
}
#endif

#endif
