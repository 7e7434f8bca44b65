#ifndef LAME_SUSY_H
#define LAME_SUSY_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of every fallible call.
typedef enum LsStatus {
  LS_STATUS_OK = 0,
  LS_STATUS_NULL_POINTER = 1,
  LS_STATUS_INVALID_ARGUMENT = 2,
  LS_STATUS_BUFFER_TOO_SMALL = 3,
  LS_STATUS_DOMAIN = 10,
  LS_STATUS_POLE = 11,
  LS_STATUS_NUMERIC = 12,
  LS_STATUS_EXCEPTIONAL_ENERGY = 13,
  LS_STATUS_BRANCH_SELECTION = 14,
  LS_STATUS_NODAL_SEED = 15,
  LS_STATUS_NODAL_WRONSKIAN = 16,
  LS_STATUS_REALITY = 17,
  LS_STATUS_PATH = 18,
  LS_STATUS_RANGE = 19,
  LS_STATUS_NULL_ACTION = 20,
  LS_STATUS_PANIC = 99,
} LsStatus;

// Band edges of the associated Lamé potential over an energy interval.
typedef struct LsBands LsBands;

// A first- or second-order SUSY partner potential.
typedef struct LsPartner LsPartner;

// Bloch solutions `ψ±` at one energy.
typedef struct LsSolution LsSolution;

// One seed of a partner: `u = ψ^sign + λ ψ^−sign` at `energy`.
typedef struct LsSeed {
  double energy;
  double lambda;
  // `+1` or `−1`.
  int32_t sign;
} LsSeed;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *ls_version(void);

// Message of the last failed call on this thread, or null. Valid until the
// next call into the library on the same thread.
const char *ls_last_error(void);

// `V(x) = m(m+1)k² sn²x + ℓ(ℓ+1)k² cn²x/dn²x`.
enum LsStatus ls_potential(uint32_t m, uint32_t ell, double ksq, double x, double *out);

// Solve at energy `energy`; `*out` receives a handle owned by the caller.
enum LsStatus ls_solution_new(uint32_t m,
                              uint32_t ell,
                              double ksq,
                              double energy,
                              struct LsSolution **out);

// Release a handle from [`ls_solution_new`]; null is ignored.
//
// # Safety
// `sol` must be null or a live handle, not used afterwards.
void ls_solution_free(struct LsSolution *sol);

// `ψ^sign(x)` as real and imaginary parts.
enum LsStatus ls_solution_evaluate(const struct LsSolution *sol,
                                   int32_t sign,
                                   double x,
                                   double *re,
                                   double *im);

// Bloch factor `ψ^sign(x + 2K) / ψ^sign(x)`.
enum LsStatus ls_solution_bloch_factor(const struct LsSolution *sol,
                                       int32_t sign,
                                       double *re,
                                       double *im);

// Series coefficients `a₀ … a_{m+ℓ}`.
enum LsStatus ls_solution_coefficients(const struct LsSolution *sol,
                                       double *buf,
                                       size_t len,
                                       size_t *written);

// Shifts `b_r` of `ψ⁺`, as separate real and imaginary buffers of
// capacity `len` each.
enum LsStatus ls_solution_shifts(const struct LsSolution *sol,
                                 double *re,
                                 double *im,
                                 size_t len,
                                 size_t *written);

// Band edges in `[emin, emax]`, located to `tolerance`.
enum LsStatus ls_bands_new(uint32_t m,
                           uint32_t ell,
                           double ksq,
                           double emin,
                           double emax,
                           double tolerance,
                           struct LsBands **out);

// # Safety
// `bands` must be null or a live handle from [`ls_bands_new`].
void ls_bands_free(struct LsBands *bands);

enum LsStatus ls_bands_edges(const struct LsBands *bands, double *buf, size_t len, size_t *written);

// Gaps as consecutive `(lower, upper)` pairs; `len` and `*written` count
// doubles, not pairs.
enum LsStatus ls_bands_gaps(const struct LsBands *bands, double *buf, size_t len, size_t *written);

// Partner from one seed (below the spectrum) or two seeds (inside one gap).
// All `lambda` zero gives the periodic partner, otherwise the
// asymptotically periodic one. Placement and nodelessness are checked.
enum LsStatus ls_partner_new(uint32_t m,
                             uint32_t ell,
                             double ksq,
                             const struct LsSeed *seeds,
                             size_t n_seeds,
                             struct LsPartner **out);

// # Safety
// `partner` must be null or a live handle from [`ls_partner_new`].
void ls_partner_free(struct LsPartner *partner);

// `Ṽ(x)`.
enum LsStatus ls_partner_value(const struct LsPartner *partner, double x, double *out);

// Order (1 or 2) and whether the partner is exactly `2K`-periodic.
enum LsStatus ls_partner_info(const struct LsPartner *partner, uint32_t *order, bool *periodic);

// Energies of the states bound at the defect (none for periodic partners).
enum LsStatus ls_partner_bound_states(const struct LsPartner *partner,
                                      double *buf,
                                      size_t len,
                                      size_t *written);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAME_SUSY_H */
