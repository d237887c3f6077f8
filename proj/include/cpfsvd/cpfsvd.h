#ifndef CPFSVD_H
#define CPFSVD_H

/*
 * C interface to the cpfsvd library: quotient and restricted singular values
 * through cross-product-free pencils.
 *
 * Every function returns a cpfsvd_status. On failure the message of the most
 * recent error on the calling thread is available from cpfsvd_last_error().
 * Objects are opaque handles released by the matching *_destroy function;
 * destroying NULL is a no-op. Matrices are passed column-major with leading
 * dimension equal to the row count.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CPFSVD_BUILDING)
#    define CPFSVD_API __declspec(dllexport)
#  else
#    define CPFSVD_API __declspec(dllimport)
#  endif
#else
#  define CPFSVD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cpfsvd_status {
    CPFSVD_OK = 0,
    CPFSVD_E_INVALID_ARGUMENT = 1,
    CPFSVD_E_DIMENSION = 2,
    CPFSVD_E_SINGULAR = 3,
    CPFSVD_E_NOT_DEFINITE = 4,
    CPFSVD_E_SOLVER = 5,
    CPFSVD_E_STRUCTURE = 6,
    CPFSVD_E_IO = 7,
    CPFSVD_E_BUFFER_TOO_SMALL = 8,
    CPFSVD_E_INTERNAL = 9
} cpfsvd_status;

typedef enum cpfsvd_formulation {
    CPFSVD_SQ_SVD = 0,
    CPFSVD_AUG_SVD = 1,
    CPFSVD_SQ_QSVD = 2,
    CPFSVD_AUG_QSVD = 3,
    CPFSVD_AUG_RSVD = 4,
    CPFSVD_CPF_SVD = 5,
    CPFSVD_CPF_QSVD = 6,
    CPFSVD_CPF_RSVD = 7
} cpfsvd_formulation;

typedef enum cpfsvd_method {
    CPFSVD_METHOD_AUTO = 0,    /* definite path for augmented forms when possible */
    CPFSVD_METHOD_GENERAL = 1, /* QZ */
    CPFSVD_METHOD_HPD = 2      /* Cholesky + Hermitian eigensolver */
} cpfsvd_method;

typedef enum cpfsvd_eigen_class {
    CPFSVD_FINITE_NONZERO = 0,
    CPFSVD_ZERO = 1,
    CPFSVD_INFINITE = 2,
    CPFSVD_INDETERMINATE = 3
} cpfsvd_eigen_class;

typedef enum cpfsvd_problem_kind { CPFSVD_KIND_SVD = 0, CPFSVD_KIND_QSVD = 1, CPFSVD_KIND_RSVD = 2 } cpfsvd_problem_kind;

typedef enum cpfsvd_sweep_axis {
    CPFSVD_AXIS_KAPPA_Y = 0,
    CPFSVD_AXIS_KAPPA_SIGMA = 1,
    CPFSVD_AXIS_KAPPA_XY = 2
} cpfsvd_sweep_axis;

typedef struct cpfsvd_matrix cpfsvd_matrix;
typedef struct cpfsvd_pencil cpfsvd_pencil;
typedef struct cpfsvd_solution cpfsvd_solution;
typedef struct cpfsvd_problem cpfsvd_problem;

/* Block counts of the restricted decomposition; index k holds subscript k+1. */
typedef struct cpfsvd_partition {
    size_t p[6];
    size_t q[6];
    size_t m[4];
    size_t n[4];
} cpfsvd_partition;

typedef struct cpfsvd_counts {
    size_t finite_nonzero;
    size_t zero;
    size_t infinite;
    size_t indeterminate;
} cpfsvd_counts;

typedef struct cpfsvd_eigenvalue {
    double alpha_re, alpha_im;
    double beta_re, beta_im;
    cpfsvd_eigen_class cls;
} cpfsvd_eigenvalue;

/* Triplet class counts: regular, (1,1,0), (1,0,1), (1,0,0), (0,1,1), trivial. */
typedef struct cpfsvd_triplet_counts {
    size_t cls[6];
    size_t zero_jordan_blocks;
} cpfsvd_triplet_counts;

typedef struct cpfsvd_sweep_config {
    cpfsvd_problem_kind kind;
    cpfsvd_sweep_axis axis;
    const double* grid;
    size_t grid_size;
    const cpfsvd_formulation* formulations;
    size_t formulation_count;
    size_t samples;
    size_t n;
    double kappa_x, kappa_y, kappa_sigma; /* values of the fixed parameters */
    uint64_t seed;
    unsigned threads; /* 0 = hardware concurrency */
} cpfsvd_sweep_config;

CPFSVD_API const char* cpfsvd_last_error(void);
CPFSVD_API const char* cpfsvd_status_string(cpfsvd_status s);
CPFSVD_API const char* cpfsvd_version(void);

CPFSVD_API cpfsvd_status cpfsvd_formulation_from_name(const char* name, cpfsvd_formulation* out);
CPFSVD_API const char* cpfsvd_formulation_name(cpfsvd_formulation f);

/* ---- matrices ---- */

/* im may be NULL for a real matrix. */
CPFSVD_API cpfsvd_status cpfsvd_matrix_create(size_t rows, size_t cols, const double* re, const double* im,
                                              cpfsvd_matrix** out);
CPFSVD_API cpfsvd_status cpfsvd_matrix_read(const char* path, cpfsvd_matrix** out);
CPFSVD_API cpfsvd_status cpfsvd_matrix_write(const cpfsvd_matrix* m, const char* path);
CPFSVD_API cpfsvd_status cpfsvd_matrix_shape(const cpfsvd_matrix* m, size_t* rows, size_t* cols);
/* re and im (either may be NULL) receive rows*cols column-major entries. */
CPFSVD_API cpfsvd_status cpfsvd_matrix_copy_out(const cpfsvd_matrix* m, double* re, double* im);
CPFSVD_API void cpfsvd_matrix_destroy(cpfsvd_matrix* m);

/* ---- pencils and eigenvalues ---- */

/* Unused operands may be NULL: svd forms read a, qsvd forms a and c. */
CPFSVD_API cpfsvd_status cpfsvd_pencil_build(cpfsvd_formulation f, const cpfsvd_matrix* a, const cpfsvd_matrix* b,
                                             const cpfsvd_matrix* c, cpfsvd_pencil** out);
CPFSVD_API cpfsvd_status cpfsvd_pencil_dim(const cpfsvd_pencil* p, size_t* dim);
/* Copies of the two coefficient matrices. */
CPFSVD_API cpfsvd_status cpfsvd_pencil_matrices(const cpfsvd_pencil* p, cpfsvd_matrix** lhs, cpfsvd_matrix** rhs);
CPFSVD_API void cpfsvd_pencil_destroy(cpfsvd_pencil* p);

/* partition may be NULL; when given, classification thresholds follow the
 * Jordan indices of the predicted structure. */
CPFSVD_API cpfsvd_status cpfsvd_solve(const cpfsvd_pencil* p, cpfsvd_method method, int want_vectors,
                                      const cpfsvd_partition* partition, cpfsvd_solution** out);
CPFSVD_API cpfsvd_status cpfsvd_solution_size(const cpfsvd_solution* s, size_t* count);
CPFSVD_API cpfsvd_status cpfsvd_solution_eigenvalue(const cpfsvd_solution* s, size_t index, cpfsvd_eigenvalue* out);
CPFSVD_API cpfsvd_status cpfsvd_solution_counts(const cpfsvd_solution* s, cpfsvd_counts* out);
CPFSVD_API void cpfsvd_solution_destroy(cpfsvd_solution* s);

/* Writes up to capacity estimates (decreasing) and stores the total in count;
 * returns CPFSVD_E_BUFFER_TOO_SMALL when capacity < count. */
CPFSVD_API cpfsvd_status cpfsvd_estimate_sigmas(const cpfsvd_solution* s, cpfsvd_formulation f, double* out,
                                                size_t capacity, size_t* count);

/* cpf pencils only; partition may be NULL except for cpf-rsvd pencils with
 * infinite eigenvalues. */
CPFSVD_API cpfsvd_status cpfsvd_triplet_classes(const cpfsvd_solution* s, const cpfsvd_pencil* p,
                                                const cpfsvd_partition* partition, cpfsvd_triplet_counts* out);

/* ---- structure ---- */

/* b and c may be NULL: (A, C) is treated as (A, I, C) and A alone as (A, I, I).
 * tol_rel <= 0 selects the default rank tolerance. */
CPFSVD_API cpfsvd_status cpfsvd_partition_compute(const cpfsvd_matrix* a, const cpfsvd_matrix* b,
                                                  const cpfsvd_matrix* c, double tol_rel, cpfsvd_partition* out);
CPFSVD_API cpfsvd_status cpfsvd_predict_counts(cpfsvd_formulation f, const cpfsvd_partition* partition,
                                               cpfsvd_counts* out);
/* Human-readable block multiset; needed receives the length including the NUL. */
CPFSVD_API cpfsvd_status cpfsvd_predict_describe(cpfsvd_formulation f, const cpfsvd_partition* partition, char* buf,
                                                 size_t capacity, size_t* needed);

/* ---- generated problems ---- */

CPFSVD_API cpfsvd_status cpfsvd_problem_generate(cpfsvd_problem_kind kind, size_t n, double kappa_x, double kappa_y,
                                                 double kappa_sigma, uint64_t seed, cpfsvd_problem** out);
/* which is 'A', 'B' or 'C'. */
CPFSVD_API cpfsvd_status cpfsvd_problem_matrix(const cpfsvd_problem* g, char which, cpfsvd_matrix** out);
CPFSVD_API cpfsvd_status cpfsvd_problem_sigmas(const cpfsvd_problem* g, double* out, size_t capacity, size_t* count);
CPFSVD_API cpfsvd_status cpfsvd_problem_partition(const cpfsvd_problem* g, cpfsvd_partition* out);
CPFSVD_API cpfsvd_status cpfsvd_problem_write(const cpfsvd_problem* g, const char* dir);
/* Largest deviation from the predicted block-diagonal form after applying the
 * generator's factors, and the pencil scale it should be compared against. */
CPFSVD_API cpfsvd_status cpfsvd_problem_verify(const cpfsvd_problem* g, cpfsvd_formulation f, double* off_structure,
                                               double* scale);
CPFSVD_API void cpfsvd_problem_destroy(cpfsvd_problem* g);

/* ---- experiments ---- */

CPFSVD_API double cpfsvd_chordal(double a, double b);
/* path "-" writes to standard output. */
CPFSVD_API cpfsvd_status cpfsvd_sweep_csv(const cpfsvd_sweep_config* cfg, const char* path);
CPFSVD_API cpfsvd_status cpfsvd_worked_example(uint64_t seed, char* buf, size_t capacity, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
