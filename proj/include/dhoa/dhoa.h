/* C interface to the deformed-oscillator reconstruction library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return DHOA_OK on success; on any failure they return a status
 * code and leave a human-readable message in dhoa_last_error() (thread-local).
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with dhoa_string_free().
 */
#ifndef DHOA_H
#define DHOA_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dhoa_status {
    DHOA_OK = 0,
    DHOA_ERR_INVALID_ARGUMENT = 1,
    DHOA_ERR_DOMAIN = 2,          /* evaluation outside the admissible set */
    DHOA_ERR_DIVERGENT = 3,       /* transform integral diverges there */
    DHOA_ERR_NUMERICAL = 4,       /* quadrature/extrapolation budget exhausted */
    DHOA_ERR_REJECTED = 5,        /* no algebra exists for this weight */
    DHOA_ERR_PARSE = 6,           /* malformed JSON configuration */
    DHOA_ERR_INTERNAL = 7
} dhoa_status;

typedef enum dhoa_mode {
    DHOA_MODE_ANNIHILATION = 0,
    DHOA_MODE_CREATION = 1
} dhoa_mode;

typedef enum dhoa_spectrum_shape {
    DHOA_SPECTRUM_ALL_INTEGERS = 0,
    DHOA_SPECTRUM_LOWER_BOUNDED = 1,
    DHOA_SPECTRUM_UPPER_BOUNDED = 2
} dhoa_spectrum_shape;

typedef struct dhoa_weight dhoa_weight;
typedef struct dhoa_profile dhoa_profile;
typedef struct dhoa_algebra dhoa_algebra;

const char* dhoa_status_name(dhoa_status s);
const char* dhoa_last_error(void);

/* Weight functions are described by a JSON object, e.g.
 *   {"family":"power","sigma":0,"alpha":1,"beta":4}
 *   {"family":"stretched_exp","k":1,"m":1}
 *   {"family":"log_gaussian","sigma":1,"n":1}
 *   {"family":"power_beta","sigma":0,"eta":1,"beta":1}
 *   {"family":"essential_edge","beta":1,"alpha":0}
 *   {"family":"tabulated","x":[...],"f":[...]}
 */
dhoa_status dhoa_weight_create(const char* spec_json, dhoa_weight** out);
void dhoa_weight_destroy(dhoa_weight* w);
dhoa_status dhoa_weight_evaluate(const dhoa_weight* w, double x, double* out);

/* method: "auto", "closed_form" or "quadrature" (NULL means "auto"). */
dhoa_status dhoa_profile_create(const dhoa_weight* w, const char* method, dhoa_profile** out);
void dhoa_profile_destroy(dhoa_profile* p);
dhoa_status dhoa_profile_value(const dhoa_profile* p, double rho, double* out);
dhoa_status dhoa_profile_log_value(const dhoa_profile* p, double rho, double* out);
/* The convergence boundary: -inf when the transform exists everywhere, +inf
 * when no upper half-line of convergence exists. */
dhoa_status dhoa_profile_abscissa(const dhoa_profile* p, double* nu);
dhoa_status dhoa_profile_ratio_limits(const dhoa_profile* p, double* at_minus, double* at_plus);

/* Builds the algebra, or returns DHOA_ERR_REJECTED. When report_json is not
 * NULL it receives the construction diagnostics either way. */
dhoa_status dhoa_algebra_build(const dhoa_profile* p, dhoa_mode mode, double mu,
                               dhoa_algebra** out, char** report_json);
void dhoa_algebra_destroy(dhoa_algebra* a);
dhoa_status dhoa_algebra_psi(const dhoa_algebra* a, double rho, double* out);
dhoa_status dhoa_algebra_psi_factorial(const dhoa_algebra* a, long n, double* out);
dhoa_status dhoa_algebra_dual(const dhoa_algebra* a, dhoa_algebra** out);
dhoa_status dhoa_algebra_spectrum(const dhoa_algebra* a, dhoa_spectrum_shape* shape, long* edge);
dhoa_status dhoa_algebra_domain(const dhoa_algebra* a, double* inner_sq, double* outer_sq);
dhoa_status dhoa_algebra_kernel(const dhoa_algebra* a, double x_re, double x_im,
                                double* out_re, double* out_im);
dhoa_status dhoa_algebra_eigen_residual(const dhoa_algebra* a, double z_re, double z_im,
                                        long extent, double* out);

/* Whole pipelines. The returned report carries an "exit_status" field with
 * the documented contract (0 verified, 1 rejected or a check failed, 3
 * numerical failure with a partial report). Parse errors return
 * DHOA_ERR_PARSE and produce no report. */
dhoa_status dhoa_analyze(const char* config_json, char** report_json);
dhoa_status dhoa_reproduce_paper(int max_threads, char** report_json);

void dhoa_string_free(char* s);

#ifdef __cplusplus
}
#endif
#endif
