/* C interface of the quasitrans library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function (NULL is accepted). Every fallible call returns a
 * qt_status; on failure qt_last_error() describes the cause for the calling
 * thread. Handles are immutable after construction except qt_series, which
 * accumulates terms, so distinct threads may share curves and boundary sets.
 *
 * Boundary samples are values at the nodes t_j = 2*pi*j/n, j = 0..n-1, of the
 * curve parameter. */
#ifndef QUASITRANS_H
#define QUASITRANS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QT_BUILDING_LIBRARY)
#define QT_API __declspec(dllexport)
#else
#define QT_API __declspec(dllimport)
#endif
#else
#define QT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qt_status {
  QT_OK = 0,
  QT_INVALID_ARGUMENT = 1,
  QT_DOMAIN_ERROR = 2,
  QT_NUMERICAL_ERROR = 3,
  QT_IO_ERROR = 4,
  QT_INTERNAL_ERROR = 5
} qt_status;

typedef enum qt_side { QT_INTERIOR = 0, QT_EXTERIOR = 1 } qt_side;

typedef enum qt_direction {
  QT_INTERIOR_TO_EXTERIOR = 0,
  QT_EXTERIOR_TO_INTERIOR = 1
} qt_direction;

typedef enum qt_domain_kind { QT_DISK = 0, QT_EXTERIOR_DISK = 1, QT_ANNULUS = 2 } qt_domain_kind;

typedef enum qt_matrix_kind {
  QT_MATRIX_DOUBLE_LAYER = 0,
  QT_MATRIX_SINGLE_LAYER = 1,
  QT_MATRIX_DIFFERENTIATION = 2,
  QT_MATRIX_INTERIOR_SYSTEM = 3,
  QT_MATRIX_EXTERIOR_SYSTEM = 4
} qt_matrix_kind;

typedef struct qt_curve qt_curve;
typedef struct qt_series qt_series;
typedef struct qt_decomposition qt_decomposition;
typedef struct qt_boundary_set qt_boundary_set;
typedef struct qt_potential qt_potential;

/* Möbius map (a z + b)/(c z + d), complex entries as (re, im) pairs. */
typedef struct qt_mobius {
  double a[2];
  double b[2];
  double c[2];
  double d[2];
} qt_mobius;

typedef struct qt_curve_diagnostics {
  double min_separation;
  double min_speed;
  double signed_area;
  double diameter;
  int injective;
  int regular;
  int positively_oriented;
} qt_curve_diagnostics;

typedef struct qt_norm_options {
  double convergence_tol;   /* relative, default 1e-6 */
  int check_refinement;     /* compare against (2N, 2n), default 1 */
  int three_point_samples;  /* 0 skips the three-point constant */
} qt_norm_options;

typedef struct qt_transmission_report {
  char family_tag[64];
  double distortion_param;
  qt_direction direction;
  int modes;
  int nodes;
  double norm_estimate;
  double refined_norm;
  double source_gram_condition;
  double system_condition;
  double hermitian_defect;
  double constant_mode_energy;
  double three_point;
  int converged;
} qt_transmission_report;

typedef struct qt_agreement_options {
  double alpha; /* Stolz opening in (0, pi/2) */
  int steps;    /* >= 8 */
  double increment_tol;
  double disagreement_tol;
} qt_agreement_options;

typedef struct qt_probe_record {
  double t;
  double point[2];
  double source_limit;
  double target_limit;
  int converged;
} qt_probe_record;

typedef struct qt_agreement_report {
  double max_discrepancy;
  double fraction_converged;
  double roundtrip_error;
  int probes;
} qt_agreement_report;

typedef struct qt_limit_estimate {
  double value[2];
  double ray_limits[2][2];
  double last_increment;
  double ray_disagreement;
  int converged;
} qt_limit_estimate;

typedef struct qt_collar_report {
  double source_energy;
  double extension_energy;
  double ratio;
} qt_collar_report;

typedef enum qt_relation { QT_EQUAL = 0, QT_AT_MOST = 1, QT_AT_LEAST = 2 } qt_relation;

typedef struct qt_check {
  const char* name; /* valid during the callback only */
  double value;
  double reference;
  double tolerance;
  qt_relation relation;
  int passed;
} qt_check;

/* Returns nonzero to stop the evaluation with QT_NUMERICAL_ERROR. */
typedef int (*qt_point_fn)(void* user, double re, double im, double* out_re, double* out_im);
typedef double (*qt_lift_fn)(void* user, double theta);
typedef void (*qt_check_fn)(void* user, const qt_check* check);

QT_API const char* qt_version(void);
QT_API const char* qt_last_error(void);
QT_API const char* qt_status_string(qt_status status);

QT_API void qt_default_norm_options(qt_norm_options* out);
QT_API void qt_default_agreement_options(qt_agreement_options* out);

/* Curves. Family names: circle, ellipse, star, cusp. */
QT_API qt_status qt_curve_family(const char* name, double param, qt_curve** out);
QT_API qt_status qt_curve_from_coefficients(const int* k, const double* re, const double* im,
                                            size_t count, const char* family_tag,
                                            double distortion_param, qt_curve** out);
QT_API qt_status qt_curve_mobius_image(const qt_curve* curve, const qt_mobius* map,
                                       qt_curve** out, int* sides_swapped);
QT_API void qt_curve_free(qt_curve* curve);
QT_API qt_status qt_curve_eval(const qt_curve* curve, double t, double* re, double* im);
/* The string lives as long as the handle. */
QT_API const char* qt_curve_family_tag(const qt_curve* curve);
QT_API double qt_curve_distortion_param(const qt_curve* curve);
QT_API qt_status qt_curve_diagnose(const qt_curve* curve, int samples, qt_curve_diagnostics* out);
QT_API qt_status qt_curve_three_point(const qt_curve* curve, int samples, double* out);

/* Harmonic series. */
QT_API qt_status qt_series_create(qt_domain_kind kind, double r_inner, double r_outer,
                                  qt_series** out);
QT_API void qt_series_free(qt_series* series);
QT_API qt_status qt_series_add_analytic(qt_series* series, int n, double re, double im);
QT_API qt_status qt_series_add_antianalytic(qt_series* series, int n, double re, double im);
QT_API qt_status qt_series_add_log(qt_series* series, double re, double im);
QT_API qt_status qt_series_evaluate(const qt_series* series, double re, double im,
                                    double* out_re, double* out_im);
/* Normalized inner product (f, g) = ½∬∇f·∇ḡ. */
QT_API qt_status qt_series_inner(const qt_series* f, const qt_series* g, double* out_re,
                                 double* out_im);
/* Classical ∬|∇h|². */
QT_API qt_status qt_series_energy(const qt_series* series, double* out);
QT_API qt_status qt_series_collar_extension(const qt_series* series, qt_collar_report* out);

QT_API qt_status qt_series_decompose(const qt_series* series, double pole_re, double pole_im,
                                     int allow_nonzero_pole, qt_decomposition** out);
QT_API void qt_decomposition_free(qt_decomposition* d);
QT_API qt_status qt_decomposition_log_coefficient(const qt_decomposition* d, double* re,
                                                  double* im);
/* Borrowed views, valid while the decomposition lives. */
QT_API const qt_series* qt_decomposition_inner_part(const qt_decomposition* d);
QT_API const qt_series* qt_decomposition_outer_part(const qt_decomposition* d);
QT_API qt_status qt_decomposition_recompose(const qt_decomposition* d, double re, double im,
                                            double* out_re, double* out_im);

QT_API qt_status qt_greens_coperiod(double pole_re, double pole_im, double radius, int nodes,
                                    double* out);
QT_API qt_status qt_collar_energy_greens(double pole_re, double pole_im, double rho, int nodes,
                                         double* out);

QT_API qt_status qt_cnt_probe(qt_point_fn f, void* user, double point_re, double point_im,
                              double alpha, int n_steps, qt_limit_estimate* out);

/* Boundary sets on the unit circle. */
QT_API qt_status qt_boundary_set_create(const double* theta1, const double* theta2,
                                        size_t count, qt_boundary_set** out);
QT_API qt_status qt_boundary_set_full_circle(qt_boundary_set** out);
QT_API void qt_boundary_set_free(qt_boundary_set* set);
QT_API double qt_boundary_set_measure(const qt_boundary_set* set);
QT_API size_t qt_boundary_set_arc_count(const qt_boundary_set* set);
QT_API qt_status qt_boundary_set_arc(const qt_boundary_set* set, size_t i, double* start,
                                     double* length);
/* Image under the circle homeomorphism with the given lift, sampled at
 * `knots` equispaced angles. */
QT_API qt_status qt_boundary_set_pushforward(const qt_boundary_set* set, qt_lift_fn lift,
                                             void* user, int knots, qt_boundary_set** out);
QT_API qt_status qt_fekete_capacity(const qt_boundary_set* set, int n, double* out);

/* Boundary integral solver. */
QT_API qt_status qt_dirichlet_energy(const qt_curve* curve, const double* h, size_t n,
                                     qt_side side, double* out);
QT_API qt_status qt_transmit(const qt_curve* curve, const double* h, size_t n, qt_side from,
                             qt_side to, qt_potential** out, double* target_energy);
QT_API void qt_potential_free(qt_potential* u);
QT_API qt_status qt_potential_eval(const qt_potential* u, double re, double im, double* out);
QT_API qt_status qt_matrix_dump(const qt_curve* curve, int n, qt_matrix_kind kind,
                                const char* path);

/* Transmission. `options` may be NULL for defaults. */
QT_API qt_status qt_transmission_norm(const qt_curve* curve, int modes, int nodes,
                                      qt_direction direction, const qt_norm_options* options,
                                      qt_transmission_report* out);
/* out[0] interior-to-exterior, out[1] exterior-to-interior. */
QT_API qt_status qt_transmission_norms(const qt_curve* curve, int modes, int nodes,
                                       const qt_norm_options* options,
                                       qt_transmission_report out[2]);
QT_API qt_status qt_mobius_conjugate_norm(const qt_curve* curve, const qt_mobius* map,
                                          int modes, int nodes, qt_direction direction,
                                          const qt_norm_options* options,
                                          qt_transmission_report* original,
                                          qt_transmission_report* image, int* sides_swapped);
/* `records` may be NULL; otherwise it must hold `probes` entries. */
QT_API qt_status qt_boundary_agreement(const qt_curve* curve, const double* h, size_t n,
                                       int probes, const qt_agreement_options* options,
                                       qt_agreement_report* out, qt_probe_record* records);

/* Seeded experiments and the full oracle suite. */
QT_API qt_status qt_decomposition_roundtrip(uint64_t seed, int count, double* max_error);
QT_API qt_status qt_collar_ratio_sample(uint64_t seed, int count, double r_inner,
                                        double* sup_ratio, int* all_finite);
/* Calls `report` once per check in a fixed order; *failures counts failed
 * checks. */
QT_API qt_status qt_validate(uint64_t seed, qt_check_fn report, void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif /* QUASITRANS_H */
