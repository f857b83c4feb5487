/* Minimal C consumer of the tqsd C ABI: build the controlled-flip
 * Hamiltonian for a pair of orthogonal qubits and verify it discriminates
 * them perfectly at t = pi (hbar = E_max = 1).
 *
 * Compile (from the repository root, after `cargo build -p tqsd-ffi`):
 *   cc crates/ffi/examples/smoke.c -Icrates/ffi/include \
 *      -Ltarget/debug -ltqsd_ffi -Wl,-rpath,$PWD/target/debug -lm -o smoke
 */

#include <math.h>
#include <stdio.h>

#include "tqsd.h"

#define CHECK(expr)                                                         \
    do {                                                                    \
        TqsdStatus status_ = (expr);                                        \
        if (status_ != TQSD_STATUS_OK) {                                    \
            char message[256];                                              \
            tqsd_last_error_message(message, sizeof message);               \
            fprintf(stderr, "%s failed (%d): %s\n", #expr, (int)status_,    \
                    message);                                               \
            return 1;                                                       \
        }                                                                   \
    } while (0)

int main(void) {
    TqsdState *r0 = NULL;
    TqsdState *r1 = NULL;
    CHECK(tqsd_state_basis(2, 0, &r0));
    CHECK(tqsd_state_basis(2, 1, &r1));

    TqsdOperator *h = NULL;
    CHECK(tqsd_attaining_hamiltonian(r0, r1, 1.0, &h));

    double t_perfect = 0.0;
    CHECK(tqsd_perfect_discrimination_time(1.0, 1.0, &t_perfect));

    const double probs[2] = {0.5, 0.5};
    const TqsdState *states[2] = {r0, r1};
    TqsdEnsemble *ensemble = NULL;
    CHECK(tqsd_ensemble_new(2, probs, states, &ensemble));

    TqsdProtocol *protocol = NULL;
    CHECK(tqsd_protocol_new(ensemble, h, t_perfect, 1.0, &protocol));
    double p = 0.0;
    CHECK(tqsd_protocol_success_probability(protocol, &p));

    double bound = 0.0;
    CHECK(tqsd_many_states_bound(ensemble, h, t_perfect, 1.0, &bound));

    tqsd_protocol_free(protocol);
    tqsd_ensemble_free(ensemble);
    tqsd_operator_free(h);
    tqsd_state_free(r0);
    tqsd_state_free(r1);

    if (fabs(p - 1.0) > 1e-9) {
        fprintf(stderr, "expected perfect discrimination, got %.15f\n", p);
        return 1;
    }
    if (bound < p - 1e-9) {
        fprintf(stderr, "bound %.15f fell below the simulation %.15f\n", bound, p);
        return 1;
    }
    printf("smoke ok: P = %.12f <= bound %.12f\n", p, bound);
    return 0;
}
