#pragma once

// Thin wrappers over the LAPACK routines the core needs. All inputs are
// taken by value (LAPACK overwrites them) and failures surface as cpfsvd::Error.

#include <vector>

#include "cpfsvd/matrix.hpp"

namespace cpfsvd::lapack {

/// Householder QR: returns (Q, diagonal of R) with Q square of the row count.
struct QrResult {
    CMatrix q;
    std::vector<cplx> r_diagonal;
};
QrResult qr(CMatrix a);

struct RealQrResult {
    RMatrix q;
    std::vector<double> r_diagonal;
};
RealQrResult qr(RMatrix a);

/// Singular values, nonincreasing.
std::vector<double> singular_values(CMatrix a);

struct SvdResult {
    CMatrix u;
    std::vector<double> s;
    CMatrix vh;
};
/// Full SVD a = u * diag(s) * vh.
SvdResult svd(CMatrix a);

struct LuSolveResult {
    CMatrix x;
    double rcond = 0.0;
};
/// LU with partial pivoting. Throws singular_matrix on an exactly zero pivot.
LuSolveResult lu_solve(CMatrix a, CMatrix b);

struct GeneralizedEigenResult {
    std::vector<cplx> alpha;
    std::vector<cplx> beta;
    CMatrix right_vectors;
};
/// QZ (xGGEV) on a square pencil.
GeneralizedEigenResult ggev(CMatrix a, CMatrix b, bool want_vectors);

struct HermitianDefiniteResult {
    std::vector<double> values;
    CMatrix vectors;
};
/// a x = lambda b x with a Hermitian, b Hermitian positive definite (xHEGV).
/// Throws not_definite when the Cholesky factorization of b fails.
HermitianDefiniteResult hegv(CMatrix a, CMatrix b, bool want_vectors);

} // namespace cpfsvd::lapack
