#pragma once

// Dense generalized eigenvalue problems lhs*x = lambda*rhs*x, returned as
// homogeneous (alpha, beta) pairs with a zero / infinite / indeterminate
// classification.

#include <optional>
#include <span>
#include <vector>

#include "cpfsvd/pencils.hpp"

namespace cpfsvd {

enum class EigenClass { finite_nonzero, zero, infinite, indeterminate };

std::string_view to_string(EigenClass c);

struct GeneralizedEigenvalue {
    cplx alpha;
    cplx beta;
    EigenClass cls = EigenClass::finite_nonzero;

    /// alpha / beta; +inf (real) for infinite, NaN for indeterminate pairs.
    cplx lambda() const;
};

struct EigenSolution {
    std::vector<GeneralizedEigenvalue> values;
    CMatrix vectors; ///< right eigenvectors, column j pairs with values[j]; empty if not requested
    bool backward_stable = true;
    double scale = 0.0;              ///< max(||lhs||_F, ||rhs||_F)
    double tolerance_zero = 0.0;     ///< relative threshold applied to |alpha|
    double tolerance_infinite = 0.0; ///< relative threshold applied to |beta|
    size_t deflated = 0;             ///< common null directions split off before QZ (reported as 0/0 pairs)

    size_t count(EigenClass c) const;
    bool has_vectors() const { return !vectors.empty(); }
};

struct ClassifyOptions {
    /// Relative threshold for both sides; default k * unit roundoff with k the
    /// pencil dimension.
    std::optional<double> tolerance;
    /// Largest expected Jordan block size at zero and at infinity. Eigenvalues of
    /// a size-v block move by O(u^(1/v)) under O(u) perturbations, so the default
    /// threshold on that side is raised to its v-th root.
    unsigned zero_index = 1;
    unsigned infinite_index = 1;
};

/// Relative classification threshold for a pencil of dimension k and a
/// Jordan index v: (k u)^(1/v) unless overridden.
double classification_tolerance(size_t k, unsigned index, const ClassifyOptions& options);

/// QZ. Common null directions of lhs and rhs are split off first and
/// reported as exact indeterminate pairs.
EigenSolution solve_general(const Pencil& p, bool want_vectors = true, const ClassifyOptions& options = {});

/// Definite path: Cholesky of rhs and a Hermitian eigensolve. Requires Hermitian
/// lhs and positive definite rhs; throws not_definite otherwise.
EigenSolution solve_hpd(const Pencil& p, bool want_vectors = true, const ClassifyOptions& options = {});

/// Re-applies the classification with the given relative thresholds.
void classify(EigenSolution& sol, double tolerance_zero, double tolerance_infinite);
void classify(EigenSolution& sol, size_t k, const ClassifyOptions& options);

/// ||(lhs - lambda rhs) w|| / ((||lhs||_2 + |lambda| ||rhs||_2) ||w||).
double relative_residual(const Pencil& p, cplx lambda, std::span<const cplx> w);

bool is_hermitian(const CMatrix& m, double rel_tol = 0.0);

} // namespace cpfsvd
