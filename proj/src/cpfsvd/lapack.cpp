#include "cpfsvd/lapack.hpp"

#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <limits>
#include <string>

namespace cpfsvd::lapack {

namespace {

lapack_int to_int(size_t n) { return static_cast<lapack_int>(n); }
lapack_int lead(size_t rows) { return std::max<lapack_int>(1, to_int(rows)); }

void check_info(lapack_int info, const char* routine)
{
    if (info < 0)
        fail(ErrorCode::invalid_argument, std::string(routine) + ": illegal argument " + std::to_string(-info));
    if (info > 0)
        fail(ErrorCode::solver_failure, std::string(routine) + ": failed with info=" + std::to_string(info));
}

} // namespace

QrResult qr(CMatrix a)
{
    const size_t m = a.rows(), n = a.cols();
    const size_t k = std::min(m, n);
    CMatrix q(m, m);
    std::vector<cplx> tau(std::max<size_t>(k, 1));
    if (m == 0)
        return {q, {}};
    check_info(LAPACKE_zgeqrf(LAPACK_COL_MAJOR, to_int(m), to_int(n), a.data(), lead(m), tau.data()), "zgeqrf");
    std::vector<cplx> diag(k);
    for (size_t i = 0; i < k; ++i)
        diag[i] = a(i, i);
    for (size_t j = 0; j < std::min(m, n); ++j)
        for (size_t i = 0; i < m; ++i)
            q(i, j) = a(i, j);
    check_info(LAPACKE_zungqr(LAPACK_COL_MAJOR, to_int(m), to_int(m), to_int(k), q.data(), lead(m), tau.data()),
               "zungqr");
    return {q, diag};
}

RealQrResult qr(RMatrix a)
{
    const size_t m = a.rows(), n = a.cols();
    const size_t k = std::min(m, n);
    RMatrix q(m, m);
    std::vector<double> tau(std::max<size_t>(k, 1));
    if (m == 0)
        return {q, {}};
    check_info(LAPACKE_dgeqrf(LAPACK_COL_MAJOR, to_int(m), to_int(n), a.data(), lead(m), tau.data()), "dgeqrf");
    std::vector<double> diag(k);
    for (size_t i = 0; i < k; ++i)
        diag[i] = a(i, i);
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < m; ++i)
            q(i, j) = a(i, j);
    check_info(LAPACKE_dorgqr(LAPACK_COL_MAJOR, to_int(m), to_int(m), to_int(k), q.data(), lead(m), tau.data()),
               "dorgqr");
    return {q, diag};
}

std::vector<double> singular_values(CMatrix a)
{
    const size_t m = a.rows(), n = a.cols();
    std::vector<double> s(std::min(m, n));
    if (s.empty())
        return s;
    check_info(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', to_int(m), to_int(n), a.data(), lead(m), s.data(), nullptr, 1,
                              nullptr, 1),
               "zgesdd");
    return s;
}

SvdResult svd(CMatrix a)
{
    const size_t m = a.rows(), n = a.cols();
    SvdResult r{CMatrix(m, m), std::vector<double>(std::min(m, n)), CMatrix(n, n)};
    if (m == 0 || n == 0) {
        r.u = CMatrix::identity(m);
        r.vh = CMatrix::identity(n);
        return r;
    }
    check_info(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', to_int(m), to_int(n), a.data(), lead(m), r.s.data(), r.u.data(),
                              lead(m), r.vh.data(), lead(n)),
               "zgesdd");
    return r;
}

LuSolveResult lu_solve(CMatrix a, CMatrix b)
{
    require(a.is_square(), ErrorCode::dimension_mismatch, "lu_solve: matrix is not square");
    require(b.rows() == a.rows(), ErrorCode::dimension_mismatch, "lu_solve: right-hand side has wrong row count");
    const size_t n = a.rows();
    if (n == 0)
        return {b, 1.0};
    const double anorm = LAPACKE_zlange(LAPACK_COL_MAJOR, '1', to_int(n), to_int(n), a.data(), lead(n));
    std::vector<lapack_int> piv(n);
    lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, to_int(n), to_int(n), a.data(), lead(n), piv.data());
    if (info > 0)
        fail(ErrorCode::singular_matrix, "lu_solve: exactly singular (zero pivot " + std::to_string(info) + ")");
    check_info(info, "zgetrf");
    double rcond = 0.0;
    check_info(LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', to_int(n), a.data(), lead(n), anorm, &rcond), "zgecon");
    if (b.cols() > 0)
        check_info(LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', to_int(n), to_int(b.cols()), a.data(), lead(n), piv.data(),
                                  b.data(), lead(n)),
                   "zgetrs");
    return {b, rcond};
}

GeneralizedEigenResult ggev(CMatrix a, CMatrix b, bool want_vectors)
{
    require(a.is_square() && b.rows() == a.rows() && b.cols() == a.cols(), ErrorCode::dimension_mismatch,
            "ggev: pencil must be square with equal shapes");
    const size_t n = a.rows();
    GeneralizedEigenResult r{std::vector<cplx>(n), std::vector<cplx>(n), CMatrix(want_vectors ? n : 0, n)};
    if (n == 0)
        return r;
    cplx dummy;
    check_info(LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', to_int(n), a.data(), lead(n), b.data(),
                             lead(n), r.alpha.data(), r.beta.data(), &dummy, 1,
                             want_vectors ? r.right_vectors.data() : &dummy, want_vectors ? lead(n) : 1),
               "zggev");
    return r;
}

HermitianDefiniteResult hegv(CMatrix a, CMatrix b, bool want_vectors)
{
    require(a.is_square() && b.rows() == a.rows() && b.cols() == a.cols(), ErrorCode::dimension_mismatch,
            "hegv: pencil must be square with equal shapes");
    const size_t n = a.rows();
    HermitianDefiniteResult r{std::vector<double>(n), CMatrix()};
    if (n == 0)
        return r;
    lapack_int info = LAPACKE_zhegv(LAPACK_COL_MAJOR, 1, want_vectors ? 'V' : 'N', 'L', to_int(n), a.data(), lead(n),
                                    b.data(), lead(n), r.values.data());
    if (info > to_int(n))
        fail(ErrorCode::not_definite, "hegv: right-hand matrix is not positive definite (leading minor " +
                                          std::to_string(info - to_int(n)) + "); use the general QZ solver instead");
    check_info(info, "zhegv");
    if (want_vectors)
        r.vectors = std::move(a);
    return r;
}

} // namespace cpfsvd::lapack
