#ifndef SFTLP_H
#define SFTLP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SftlpStatus {
  SFTLP_STATUS_OK = 0,
  SFTLP_STATUS_NULL_POINTER = 1,
  SFTLP_STATUS_INVALID_ARGUMENT = 2,
  SFTLP_STATUS_IO = 3,
  SFTLP_STATUS_FORMAT = 4,
  SFTLP_STATUS_SHAPE = 5,
  SFTLP_STATUS_NON_FINITE = 6,
  SFTLP_STATUS_BUFFER_TOO_SMALL = 7,
  SFTLP_STATUS_PANIC = 8,
} SftlpStatus;

typedef enum SftlpMode {
  SFTLP_MODE_MCA = 0,
  SFTLP_MODE_SINGLE_COMPONENT = 1,
  SFTLP_MODE_NO_MASK = 2,
} SftlpMode;

typedef enum SftlpTransform {
  SFTLP_TRANSFORM_SFT = 0,
  SFTLP_TRANSFORM_HAAR = 1,
} SftlpTransform;

typedef enum SftlpNorm {
  SFTLP_NORM_LP = 0,
  SFTLP_NORM_L1 = 1,
} SftlpNorm;

typedef enum SftlpComponent {
  SFTLP_COMPONENT_RECOVERED = 0,
  SFTLP_COMPONENT_CARTOON = 1,
  SFTLP_COMPONENT_TEXTURE = 2,
} SftlpComponent;

// Opaque image handle.
typedef struct SftlpImage SftlpImage;

// Opaque solver output handle.
typedef struct SftlpResult SftlpResult;

// Solver parameters. Start from [`sftlp_config_default`].
typedef struct SftlpConfig {
  double alpha0;
  double alpha1;
  double alpha2;
  double lambda0;
  double lambda1;
  double lambda2;
  double p0;
  double p1;
  double p2;
  double gamma;
  double tol;
  uint32_t max_iters;
  // An `SftlpMode` value.
  uint32_t mode;
  // An `SftlpTransform` value.
  uint32_t transform;
  // An `SftlpNorm` value.
  uint32_t norm;
} SftlpConfig;

// `psnr` is `+inf` for identical images.
typedef struct SftlpMetrics {
  double psnr;
  double ssim;
  double gmsd;
} SftlpMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

struct SftlpConfig sftlp_config_default(void);

// Length in bytes of the last error message on this thread, excluding the
// terminating NUL; 0 when there is none.
size_t sftlp_last_error_length(void);

// Copies the last error message (NUL-terminated, truncated to fit) into
// `buf` and returns the full message length.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t sftlp_last_error_message(char *buf, size_t len);

// Builds an image from `rows * cols` row-major doubles.
//
// # Safety
// `data` must point to `rows * cols` readable doubles; `out` must be writable.
enum SftlpStatus sftlp_image_new(size_t rows,
                                 size_t cols,
                                 const double *data,
                                 struct SftlpImage **out);

// # Safety
// `image` must be null or a handle not yet freed.
void sftlp_image_free(struct SftlpImage *image);

// # Safety
// `image` must be a live handle.
size_t sftlp_image_rows(const struct SftlpImage *image);

// # Safety
// `image` must be a live handle.
size_t sftlp_image_cols(const struct SftlpImage *image);

// Copies the pixels in row-major order into `buf`, which holds `len` doubles.
//
// # Safety
// `image` must be a live handle and `buf` must point to `len` writable doubles.
enum SftlpStatus sftlp_image_copy_pixels(const struct SftlpImage *image, double *buf, size_t len);

// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum SftlpStatus sftlp_image_read_pgm(const char *path, struct SftlpImage **out);

// Writes an 8-bit binary PGM; values are rounded and clamped to `[0, 255]`.
//
// # Safety
// `image` must be a live handle; `path` a NUL-terminated string.
enum SftlpStatus sftlp_image_write_pgm(const struct SftlpImage *image, const char *path);

// # Safety
// `image` must be a live handle; `out` must be writable.
enum SftlpStatus sftlp_add_noise(const struct SftlpImage *image,
                                 double level,
                                 double salt_fraction,
                                 uint64_t seed,
                                 struct SftlpImage **out);

// Runs the solver. `reference` may be null; when given, the trace records
// PSNR per iteration.
//
// # Safety
// `observed` and a non-null `reference` must be live handles; `config` must
// point to a valid config; `out` must be writable.
enum SftlpStatus sftlp_denoise(const struct SftlpImage *observed,
                               const struct SftlpConfig *config,
                               const struct SftlpImage *reference,
                               struct SftlpResult **out);

// # Safety
// `result` must be null or a handle not yet freed.
void sftlp_result_free(struct SftlpResult *result);

// # Safety
// `result` must be a live handle.
size_t sftlp_result_iterations(const struct SftlpResult *result);

// # Safety
// `result` must be a live handle.
bool sftlp_result_converged(const struct SftlpResult *result);

// Copies one output image (an `SftlpComponent` value) into a new handle.
//
// # Safety
// `result` must be a live handle; `out` must be writable.
enum SftlpStatus sftlp_result_image(const struct SftlpResult *result,
                                    uint32_t which,
                                    struct SftlpImage **out);

// Copies the per-iteration relative change and PSNR into two arrays of
// `len` doubles each. PSNR entries are NaN without a reference and `+inf`
// for an exact match. Either array may be null.
//
// # Safety
// `result` must be a live handle; non-null arrays must hold `len` doubles.
enum SftlpStatus sftlp_result_copy_trace(const struct SftlpResult *result,
                                         double *rel_change,
                                         double *psnr,
                                         size_t len);

// # Safety
// Both images must be live handles; `out` must be writable.
enum SftlpStatus sftlp_evaluate(const struct SftlpImage *reference,
                                const struct SftlpImage *test,
                                struct SftlpMetrics *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SFTLP_H */
