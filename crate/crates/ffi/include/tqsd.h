#ifndef TQSD_H
#define TQSD_H

/* This file is generated by cbindgen from tqsd-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes for every entry point.
 */
typedef enum TqsdStatus {
  TQSD_STATUS_OK = 0,
  TQSD_STATUS_NULL_POINTER = 1,
  TQSD_STATUS_INVALID_ARGUMENT = 2,
  TQSD_STATUS_DIMENSION_MISMATCH = 3,
  TQSD_STATUS_NOT_HERMITIAN = 4,
  TQSD_STATUS_NOT_POSITIVE_SEMIDEFINITE = 5,
  TQSD_STATUS_INVALID_TRACE = 6,
  TQSD_STATUS_INVALID_DISTRIBUTION = 7,
  TQSD_STATUS_INDEX_OUT_OF_RANGE = 8,
  TQSD_STATUS_UNREACHABLE = 9,
  TQSD_STATUS_NUMERICAL_ERROR = 10,
  TQSD_STATUS_IO_ERROR = 11,
  TQSD_STATUS_PANIC = 12,
} TqsdStatus;

/*
 Opaque ensemble handle.
 */
typedef struct TqsdEnsemble TqsdEnsemble;

/*
 Opaque Hermitian operator handle.
 */
typedef struct TqsdOperator TqsdOperator;

/*
 Opaque protocol handle (ensemble + Hamiltonian + time + hbar).
 */
typedef struct TqsdProtocol TqsdProtocol;

/*
 Opaque density-matrix handle.
 */
typedef struct TqsdState TqsdState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copy the last error message (NUL terminated) into `buffer`. Returns the
 number of bytes the full message needs, including the terminator; zero
 means no error has been recorded on this thread.
 */
size_t tqsd_last_error_message(char *buffer, size_t capacity);

/*
 Validate and wrap a Hermitian matrix (row-major interleaved).
 */
enum TqsdStatus tqsd_operator_new(size_t dim, const double *entries, struct TqsdOperator **out);

void tqsd_operator_free(struct TqsdOperator *op);

enum TqsdStatus tqsd_operator_dim(const struct TqsdOperator *op, size_t *out);

/*
 Largest eigenvalue magnitude, `||H||_inf`.
 */
enum TqsdStatus tqsd_operator_spectral_norm(const struct TqsdOperator *op, double *out);

/*
 Eigenvalues in ascending order; `buffer` must hold `dim` doubles.
 */
enum TqsdStatus tqsd_operator_eigenvalues(const struct TqsdOperator *op, double *buffer);

/*
 Matrix entries, row-major interleaved; `buffer` needs `2 * dim * dim`.
 */
enum TqsdStatus tqsd_operator_entries(const struct TqsdOperator *op, double *buffer);

/*
 Validate and wrap a density matrix (Hermitian, PSD, unit trace).
 */
enum TqsdStatus tqsd_state_new(size_t dim, const double *entries, struct TqsdState **out);

/*
 Computational basis state `|index><index|`.
 */
enum TqsdStatus tqsd_state_basis(size_t dim, size_t index, struct TqsdState **out);

void tqsd_state_free(struct TqsdState *state);

enum TqsdStatus tqsd_state_dim(const struct TqsdState *state, size_t *out);

/*
 Build an ensemble from parallel arrays of probabilities and states.
 The states are copied; the caller keeps ownership of the handles.
 */
enum TqsdStatus tqsd_ensemble_new(size_t count,
                                  const double *probabilities,
                                  const struct TqsdState *const *states,
                                  struct TqsdEnsemble **out);

void tqsd_ensemble_free(struct TqsdEnsemble *ensemble);

enum TqsdStatus tqsd_trace_distance(const struct TqsdState *r0,
                                    const struct TqsdState *r1,
                                    double *out);

/*
 Optimal two-state guessing probability `p0 + Delta(p1 rho1, p0 rho0)`.
 */
enum TqsdStatus tqsd_helstrom_guess(double p0,
                                    const struct TqsdState *r0,
                                    double p1,
                                    const struct TqsdState *r1,
                                    double *out);

/*
 Min-entropy in bits, `-log2(p_guess)`.
 */
enum TqsdStatus tqsd_min_entropy(double p_guess, double *out);

/*
 Build a protocol; the Hamiltonian must act on `dim * count` and is
 shifted so its ground energy is zero.
 */
enum TqsdStatus tqsd_protocol_new(const struct TqsdEnsemble *ensemble,
                                  const struct TqsdOperator *hamiltonian,
                                  double time,
                                  double hbar,
                                  struct TqsdProtocol **out);

void tqsd_protocol_free(struct TqsdProtocol *protocol);

/*
 Average readout success probability of the protocol.
 */
enum TqsdStatus tqsd_protocol_success_probability(const struct TqsdProtocol *protocol, double *out);

/*
 `gamma(k)`: 5/pi inside (1, 4), 3/pi otherwise.
 */
enum TqsdStatus tqsd_gamma_factor(double k, double *out);

/*
 N-state average-energy bound on the success probability.
 */
enum TqsdStatus tqsd_many_states_bound(const struct TqsdEnsemble *ensemble,
                                       const struct TqsdOperator *hamiltonian,
                                       double time,
                                       double hbar,
                                       double *out);

/*
 Two-state max-energy bound through the trace-distance functional.
 */
enum TqsdStatus tqsd_simple_trace_bound(double p0,
                                        const struct TqsdState *r0,
                                        double p1,
                                        const struct TqsdState *r1,
                                        const struct TqsdOperator *hamiltonian,
                                        double time,
                                        double hbar,
                                        double *out);

/*
 Two-state average-energy bound.
 */
enum TqsdStatus tqsd_avg_energy_two_state_bound(double p0,
                                                const struct TqsdState *r0,
                                                double p1,
                                                const struct TqsdState *r1,
                                                const struct TqsdOperator *hamiltonian,
                                                double time,
                                                double hbar,
                                                double *out);

/*
 Margolus-Levitin time for `rho` embedded next to a basis ancilla.
 */
enum TqsdStatus tqsd_margolus_levitin_time(const struct TqsdOperator *hamiltonian,
                                           const struct TqsdState *rho,
                                           size_t ancilla_dim,
                                           size_t ancilla_index,
                                           double hbar,
                                           double *out);

/*
 The controlled-flip Hamiltonian `E_max (H_hat + I)/2` for a state pair,
 on dimension `2 * dim`.
 */
enum TqsdStatus tqsd_attaining_hamiltonian(const struct TqsdState *r0,
                                           const struct TqsdState *r1,
                                           double e_max,
                                           struct TqsdOperator **out);

/*
 Closed-form success curve of the controlled-flip construction.
 */
enum TqsdStatus tqsd_attaining_success_closed_form(const struct TqsdState *r0,
                                                   const struct TqsdState *r1,
                                                   double e_max,
                                                   double time,
                                                   double hbar,
                                                   double *out);

/*
 `hbar * pi / e_max`.
 */
enum TqsdStatus tqsd_perfect_discrimination_time(double e_max, double hbar, double *out);

/*
 The quantum optimum `1/2 + 1/(2 sqrt(2))`.
 */
double tqsd_chsh_quantum_optimum(void);

/*
 Time-dependent Tsirelson bound for Bob's Hamiltonian.
 */
enum TqsdStatus tqsd_tsirelson_time_bound(const struct TqsdOperator *bob_hamiltonian,
                                          double time,
                                          double hbar,
                                          double *out);

/*
 Minimum time to reach the optimum quantum violation.
 */
enum TqsdStatus tqsd_min_time_for_tsirelson(double e_max, double hbar, double gamma, double *out);

/*
 Lower bound on `||H||_inf` from an observed winning probability.
 */
enum TqsdStatus tqsd_energy_witness(double q_observed, double time, double hbar, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TQSD_H */
