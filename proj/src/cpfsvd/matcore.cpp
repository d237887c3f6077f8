#include "cpfsvd/matcore.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "cpfsvd/lapack.hpp"

namespace cpfsvd {

CMatrix haar_unitary(size_t n, Rng& rng)
{
    require(n >= 1, ErrorCode::invalid_argument, "haar_unitary: n must be at least 1");
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix g(n, n);
    const double s = std::sqrt(0.5);
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i) {
            double re = normal(rng);
            double im = normal(rng);
            g(i, j) = cplx(s * re, s * im);
        }
    auto [q, r] = lapack::qr(std::move(g));
    for (size_t j = 0; j < n; ++j) {
        double mag = std::abs(r[j]);
        cplx phase = mag > 0.0 ? r[j] / mag : cplx(1.0);
        for (size_t i = 0; i < n; ++i)
            q(i, j) *= phase;
    }
    return q;
}

RMatrix haar_orthogonal(size_t n, Rng& rng)
{
    require(n >= 1, ErrorCode::invalid_argument, "haar_orthogonal: n must be at least 1");
    std::normal_distribution<double> normal(0.0, 1.0);
    RMatrix g(n, n);
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i)
            g(i, j) = normal(rng);
    auto [q, r] = lapack::qr(std::move(g));
    for (size_t j = 0; j < n; ++j)
        if (r[j] < 0.0)
            for (size_t i = 0; i < n; ++i)
                q(i, j) = -q(i, j);
    return q;
}

std::vector<double> singular_values(const CMatrix& m)
{
    return lapack::singular_values(m);
}

RankReport rank_with_tol(const CMatrix& m, std::optional<double> tol_rel)
{
    RankReport report;
    const double rel = tol_rel.value_or(static_cast<double>(std::max(m.rows(), m.cols())) * kUnitRoundoff);
    require(rel >= 0.0, ErrorCode::invalid_argument, "rank_with_tol: tolerance must be nonnegative");
    report.values = singular_values(m);
    const double smax = report.values.empty() ? 0.0 : report.values.front();
    report.tolerance = rel * smax;
    for (double s : report.values)
        if (s > report.tolerance)
            ++report.rank;
    return report;
}

double norm2(const CMatrix& m)
{
    auto s = singular_values(m);
    return s.empty() ? 0.0 : s.front();
}

double cond2_estimate(const CMatrix& m)
{
    auto s = singular_values(m);
    require(!s.empty() && s.front() > 0.0, ErrorCode::invalid_argument, "cond2_estimate: matrix is zero or empty");
    const double smin = s.back();
    if (smin == 0.0 || smin < s.front() / std::numeric_limits<double>::max())
        return std::numeric_limits<double>::infinity();
    return s.front() / smin;
}

CMatrix solve_linear(const CMatrix& m, const CMatrix& rhs)
{
    auto [x, rcond] = lapack::lu_solve(m, rhs);
    if (rcond < kUnitRoundoff)
        fail(ErrorCode::singular_matrix,
             "solve_linear: matrix is singular to working precision (rcond " + std::to_string(rcond) + ")");
    return x;
}

XMatrix solve_linear(const XMatrix& m, const XMatrix& rhs)
{
    require(m.is_square(), ErrorCode::dimension_mismatch, "solve_linear: matrix is not square");
    require(rhs.rows() == m.rows(), ErrorCode::dimension_mismatch, "solve_linear: right-hand side has wrong row count");
    const size_t n = m.rows();
    XMatrix lu = m;
    XMatrix x = rhs;
    for (size_t k = 0; k < n; ++k) {
        size_t p = k;
        double best = std::abs(lu(k, k).to_double());
        for (size_t i = k + 1; i < n; ++i) {
            double v = std::abs(lu(i, k).to_double());
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0)
            fail(ErrorCode::singular_matrix, "solve_linear: exactly singular in extended precision");
        if (p != k) {
            for (size_t j = 0; j < n; ++j)
                std::swap(lu(k, j), lu(p, j));
            for (size_t j = 0; j < x.cols(); ++j)
                std::swap(x(k, j), x(p, j));
        }
        for (size_t i = k + 1; i < n; ++i) {
            DoubleDouble f = lu(i, k) / lu(k, k);
            lu(i, k) = f;
            for (size_t j = k + 1; j < n; ++j)
                lu(i, j) -= f * lu(k, j);
            for (size_t j = 0; j < x.cols(); ++j)
                x(i, j) -= f * x(k, j);
        }
    }
    for (size_t j = 0; j < x.cols(); ++j)
        for (size_t ii = n; ii-- > 0;) {
            DoubleDouble s = x(ii, j);
            for (size_t k = ii + 1; k < n; ++k)
                s -= lu(ii, k) * x(k, j);
            x(ii, j) = s / lu(ii, ii);
        }
    return x;
}

CMatrix read_matrix(std::istream& in)
{
    std::string line;
    auto next_line = [&](const char* what) {
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                return;
        }
        fail(ErrorCode::io, std::string("read_matrix: unexpected end of input while reading ") + what);
    };

    next_line("header");
    std::istringstream header(line);
    long long rows = -1, cols = -1;
    std::string field;
    if (!(header >> rows >> cols >> field) || rows < 0 || cols < 0)
        fail(ErrorCode::io, "read_matrix: malformed header '" + line + "'");
    const bool complex_field = field == "complex";
    if (!complex_field && field != "real")
        fail(ErrorCode::io, "read_matrix: unknown field '" + field + "'");

    CMatrix m(static_cast<size_t>(rows), static_cast<size_t>(cols));
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) {
            next_line("entries");
            std::istringstream entry(line);
            double re = 0.0, im = 0.0;
            if (!(entry >> re) || (complex_field && !(entry >> im)))
                fail(ErrorCode::io, "read_matrix: malformed entry '" + line + "'");
            m(i, j) = cplx(re, im);
        }
    return m;
}

CMatrix read_matrix_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::io, "cannot open '" + path + "' for reading");
    return read_matrix(in);
}

void write_matrix(std::ostream& out, const CMatrix& m)
{
    const bool real = is_real(m);
    out << m.rows() << ' ' << m.cols() << (real ? " real\n" : " complex\n");
    char buf[64];
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) {
            if (real) {
                std::snprintf(buf, sizeof buf, "%.17e\n", m(i, j).real());
            } else {
                std::snprintf(buf, sizeof buf, "%.17e %.17e\n", m(i, j).real(), m(i, j).imag());
            }
            out << buf;
        }
}

void write_matrix_file(const std::string& path, const CMatrix& m)
{
    std::ofstream out(path);
    if (!out)
        fail(ErrorCode::io, "cannot open '" + path + "' for writing");
    write_matrix(out, m);
    if (!out)
        fail(ErrorCode::io, "write to '" + path + "' failed");
}

} // namespace cpfsvd
