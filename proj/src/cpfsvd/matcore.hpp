#pragma once

// Dense linear algebra foundation: random orthonormal sampling, numerical
// rank, linear solves in working and extended precision, condition numbers,
// and the plain-text matrix format.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cpfsvd/matrix.hpp"

namespace cpfsvd {

using Rng = std::mt19937_64;

/// Unit roundoff of binary64, 2^-53.
inline constexpr double kUnitRoundoff = 1.1102230246251565e-16;

/// Haar-distributed n x n unitary matrix (Gaussian matrix, QR, phase fix by diag(R)).
CMatrix haar_unitary(size_t n, Rng& rng);

/// Real orthogonal analogue of haar_unitary.
RMatrix haar_orthogonal(size_t n, Rng& rng);

struct RankReport {
    size_t rank = 0;
    std::vector<double> values; ///< singular values, nonincreasing
    double tolerance = 0.0;     ///< absolute cut-off actually applied
};

/// Numerical rank: number of singular values strictly above tol_rel * s_max.
/// The default relative tolerance is max(rows, cols) * unit roundoff.
RankReport rank_with_tol(const CMatrix& m, std::optional<double> tol_rel = std::nullopt);

std::vector<double> singular_values(const CMatrix& m);

/// Spectral norm.
double norm2(const CMatrix& m);

/// s_max / s_min, or +inf when s_min is zero or the ratio overflows.
double cond2_estimate(const CMatrix& m);

/// Solves m * z = rhs. Throws singular_matrix when m is singular to working precision.
CMatrix solve_linear(const CMatrix& m, const CMatrix& rhs);

/// Extended-precision solve by LU with partial pivoting.
XMatrix solve_linear(const XMatrix& m, const XMatrix& rhs);

/// Text format: header "rows cols field" (field is real or complex) followed
/// by rows*cols entries in row-major order, one per line.
CMatrix read_matrix(std::istream& in);
CMatrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const CMatrix& m);
void write_matrix_file(const std::string& path, const CMatrix& m);

} // namespace cpfsvd
