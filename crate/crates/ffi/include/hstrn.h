#ifndef HSTRN_H
#define HSTRN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HstrnStatus {
  HSTRN_STATUS_OK = 0,
  HSTRN_STATUS_NULL_POINTER = 1,
  HSTRN_STATUS_INVALID_PARAM = 2,
  HSTRN_STATUS_DOMAIN = 3,
  HSTRN_STATUS_TRUNCATION = 4,
  HSTRN_STATUS_RESOURCE = 5,
  HSTRN_STATUS_NON_CONVERGENCE = 6,
  HSTRN_STATUS_UNSUPPORTED = 7,
  HSTRN_STATUS_PANIC = 8,
} HstrnStatus;

typedef enum HstrnMethod {
  HSTRN_METHOD_CLOSED_FORM = 0,
  HSTRN_METHOD_QUADRATURE = 1,
} HstrnMethod;

typedef enum HstrnSimMode {
  HSTRN_SIM_MODE_PAPER_INDEPENDENT = 0,
  HSTRN_SIM_MODE_SHARED_UPLINK = 1,
} HstrnSimMode;

/**
 * Opaque validated configuration.
 */
typedef struct HstrnConfig HstrnConfig;

/**
 * Shadowed-Rician first hop, linear units.
 */
typedef struct HstrnSrParams {
  double p_s;
  double m_s;
  double xi_s;
  double rho_s;
} HstrnSrParams;

/**
 * α-μ second hop, linear SNR.
 */
typedef struct HstrnHopParams {
  double alpha;
  double mu;
  double rho;
} HstrnHopParams;

typedef struct HstrnConfigParams {
  struct HstrnSrParams sr;
  struct HstrnHopParams user;
  struct HstrnHopParams eve;
  uint32_t n;
  uint32_t p;
  uint32_t q;
  /**
   * Target secrecy rate, bits/s/Hz.
   */
  double phi_c;
  /**
   * Starting series truncation; 0 keeps the default of 20.
   */
  uint32_t terms;
} HstrnConfigParams;

typedef struct HstrnMetric {
  double value;
  double raw_value;
  uint64_t terms_used;
  double tail_estimate;
  uint64_t fallbacks;
} HstrnMetric;

typedef struct HstrnSimResult {
  double sopm;
  double esmc;
  double pnsmc;
  double se_sopm;
  double se_esmc;
  double se_pnsmc;
  uint64_t n_trials;
} HstrnSimResult;

typedef struct HstrnShadowing {
  double p_s;
  double m_s;
  double xi_s;
} HstrnShadowing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Validates `params` and stores a new handle in `*out`. Release it with
 * [`hstrn_config_free`].
 *
 * # Safety
 * `params` must point to a valid `HstrnConfigParams`; `out` must be writable.
 */
enum HstrnStatus hstrn_config_new(const struct HstrnConfigParams *params, struct HstrnConfig **out);

/**
 * # Safety
 * `cfg` must be null or a handle from [`hstrn_config_new`] not yet freed.
 */
void hstrn_config_free(struct HstrnConfig *cfg);

/**
 * Secrecy outage probability.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum HstrnStatus hstrn_sopm(const struct HstrnConfig *cfg,
                            enum HstrnMethod method,
                            struct HstrnMetric *out);

/**
 * Ergodic secrecy multicast capacity, bits/s/Hz, unclamped.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum HstrnStatus hstrn_esmc(const struct HstrnConfig *cfg,
                            enum HstrnMethod method,
                            struct HstrnMetric *out);

/**
 * Probability of non-zero secrecy multicast capacity.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum HstrnStatus hstrn_pnsmc(const struct HstrnConfig *cfg,
                             enum HstrnMethod method,
                             struct HstrnMetric *out);

/**
 * Monte-Carlo estimate of all three metrics.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum HstrnStatus hstrn_simulate(const struct HstrnConfig *cfg,
                                uint64_t n_trials,
                                uint64_t seed,
                                enum HstrnSimMode mode,
                                uint32_t workers,
                                struct HstrnSimResult *out);

/**
 * Loo `(μ, d0)` to Shadowed-Rician; `P_s` is copied through.
 *
 * # Safety
 * `out` must be writable.
 */
enum HstrnStatus hstrn_loo_to_sr(double mu_loo, double d0, double p_s, struct HstrnShadowing *out);

/**
 * Shadowing case 1..=4.
 *
 * # Safety
 * `out` must be writable.
 */
enum HstrnStatus hstrn_shadowing_preset(uint32_t case_index, struct HstrnShadowing *out);

/**
 * Message for the last failing call on this thread; empty after success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *hstrn_last_error_message(void);

const char *hstrn_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HSTRN_H */
