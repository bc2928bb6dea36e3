/* pcstab — point-cloud permutation/rotation cipher and geometric-stability
 * analysis, C API.
 *
 * All entry points return a pcstab status code; 0 is success. String results
 * are heap-allocated JSON documents owned by the caller; release them with
 * pcstab_string_free. Error details for the calling thread are available via
 * pcstab_last_error.
 */
#ifndef PCSTAB_H
#define PCSTAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PCSTAB_API __declspec(dllexport)
#else
#define PCSTAB_API __attribute__((visibility("default")))
#endif

enum {
  PCSTAB_OK = 0,
  PCSTAB_ERR_USAGE = 1,     /* invalid configuration or arguments */
  PCSTAB_ERR_PARSE = 2,     /* malformed input file or JSON */
  PCSTAB_DIAGNOSIS = 3,     /* decryption failed; diagnosis produced */
  PCSTAB_VIOLATION = 4,     /* a proved bound was violated */
  PCSTAB_ERR_IO = 5         /* file system error */
};

typedef struct pcstab_cloud pcstab_cloud;

/* Last error message for the calling thread ("" when none). The pointer is
 * valid until the next pcstab call on the same thread. */
PCSTAB_API const char* pcstab_last_error(void);

PCSTAB_API void pcstab_string_free(char* s);

/* ---- point clouds ---- */

/* coords: n*dim doubles, point-major; dim is 2 or 3 */
PCSTAB_API pcstab_cloud* pcstab_cloud_create(const double* coords, size_t n,
                                             int dim);
/* CSV or ASCII PLY, detected by content */
PCSTAB_API pcstab_cloud* pcstab_cloud_load(const char* path);
PCSTAB_API int pcstab_cloud_save_csv(const pcstab_cloud* cloud,
                                     const char* path);
PCSTAB_API size_t pcstab_cloud_size(const pcstab_cloud* cloud);
PCSTAB_API int pcstab_cloud_dim(const pcstab_cloud* cloud);
/* writes dim doubles into out */
PCSTAB_API int pcstab_cloud_get(const pcstab_cloud* cloud, size_t index,
                                double* out);
PCSTAB_API void pcstab_cloud_free(pcstab_cloud* cloud);

/* ---- commands; config is a pcstab-config-v1 JSON document ---- */

/* result: {"cipher": [...], "trace": {...}} */
PCSTAB_API int pcstab_encrypt(const char* config_json,
                              const pcstab_cloud* plain,
                              pcstab_cloud** cipher_out, char** result_json);

/* cipher may be NULL when config embeds a "trace" object. On a unique
 * solution returns PCSTAB_OK and fills recovered_out (if non-NULL);
 * otherwise returns PCSTAB_DIAGNOSIS with the diagnosis in result_json. */
PCSTAB_API int pcstab_decrypt(const char* config_json,
                              const pcstab_cloud* cipher,
                              pcstab_cloud** recovered_out,
                              char** result_json);

/* Stability verdicts and closed-form bounds. The plaintext sphere comes
 * from config["sphere"] or, if absent, from the plain cloud (may be NULL
 * when a sphere override is given). */
PCSTAB_API int pcstab_analyze(const char* config_json,
                              const pcstab_cloud* cipher,
                              const pcstab_cloud* plain, char** result_json);

/* Monte Carlo bound verification plus instability census. Returns
 * PCSTAB_VIOLATION if any proved bound failed. */
PCSTAB_API int pcstab_verify(const char* config_json, char** result_json);

/* trace_json: a pcstab-trace-v1 document */
PCSTAB_API int pcstab_plotdata(const char* trace_json, char** result_json);

/* which: "example1" or "example2" */
PCSTAB_API int pcstab_reproduce(const char* which, const char* config_json,
                                char** result_json);

#ifdef __cplusplus
}
#endif

#endif /* PCSTAB_H */
