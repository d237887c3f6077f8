#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cpfsvd/error.hpp"
#include "cpfsvd/matcore.hpp"

using namespace cpfsvd;

namespace {

double dev_from_identity(const CMatrix& q)
{
    const CMatrix g = adjoint(q) * q;
    double m = 0.0;
    for (size_t j = 0; j < g.cols(); ++j)
        for (size_t i = 0; i < g.rows(); ++i)
            m = std::max(m, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    return m;
}

} // namespace

TEST(Haar, UnitaryAndOrthogonal)
{
    Rng rng(3);
    for (size_t n : {1, 3, 8, 30}) {
        EXPECT_LT(dev_from_identity(haar_unitary(n, rng)), 1e-13) << n;
        EXPECT_LT(dev_from_identity(to_complex(haar_orthogonal(n, rng))), 1e-13) << n;
    }
    EXPECT_THROW(haar_unitary(0, rng), Error);
}

TEST(Haar, PhasesAreUniform)
{
    // a Haar matrix has E[q_11] = 0; a missing phase fix biases it towards diag(R) > 0
    Rng rng(5);
    double mean = 0.0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t)
        mean += haar_orthogonal(3, rng)(0, 0);
    EXPECT_LT(std::abs(mean / trials), 0.05);
}

TEST(Rank, DiagonalWithTinyEntry)
{
    CMatrix d(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 1e-3;
    d(2, 2) = 1e-20;
    const RankReport r = rank_with_tol(d);
    EXPECT_EQ(r.rank, 2u);
    ASSERT_EQ(r.values.size(), 3u);
    EXPECT_DOUBLE_EQ(r.values[0], 1.0);
    EXPECT_EQ(rank_with_tol(d, 1e-2).rank, 1u);
    EXPECT_EQ(rank_with_tol(CMatrix(2, 4)).rank, 0u);
}

TEST(Norms, SpectralNormAndCondition)
{
    // [3 0; 4 5] has singular values sqrt(45) and sqrt(5)
    CMatrix a{{3.0, 0.0}, {4.0, 5.0}};
    EXPECT_NEAR(norm2(a), std::sqrt(45.0), 1e-14);
    EXPECT_NEAR(cond2_estimate(a), 3.0, 1e-13);
    CMatrix s{{1.0, 2.0}, {2.0, 4.0}};
    // s_min comes out at roundoff level, not exactly zero
    EXPECT_GT(cond2_estimate(s), 1e15);
    CMatrix z{{1.0, 0.0}, {0.0, 0.0}};
    EXPECT_TRUE(std::isinf(cond2_estimate(z)));
}

TEST(Solve, WorkingPrecision)
{
    CMatrix a{{2.0, 1.0}, {1.0, 3.0}};
    CMatrix b{{3.0}, {5.0}};
    const CMatrix x = solve_linear(a, b);
    EXPECT_NEAR(x(0, 0).real(), 0.8, 1e-15);
    EXPECT_NEAR(x(1, 0).real(), 1.4, 1e-15);
    CMatrix s{{1.0, 2.0}, {2.0, 4.0}};
    try {
        solve_linear(s, b);
        FAIL() << "expected singular_matrix";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::singular_matrix);
    }
}

TEST(Solve, ExtendedPrecisionHilbert)
{
    // H x = H 1 for the 6x6 Hilbert matrix (condition ~1.5e7) recovers 1 far
    // beyond binary64 accuracy
    const size_t n = 6;
    XMatrix h(n, n), one(n, 1);
    for (size_t i = 0; i < n; ++i) {
        one(i, 0) = DoubleDouble(1.0);
        for (size_t j = 0; j < n; ++j)
            h(i, j) = DoubleDouble(1.0) / DoubleDouble(static_cast<double>(i + j + 1));
    }
    const XMatrix x = solve_linear(h, h * one);
    for (size_t i = 0; i < n; ++i)
        EXPECT_LT(std::abs((x(i, 0) - DoubleDouble(1.0)).to_double()), 1e-20);
}

TEST(MatrixText, RoundTripRealAndComplex)
{
    CMatrix m{{1.5, -2.0}, {cplx(0.0, 1.0), 1e-300}};
    std::stringstream ss;
    write_matrix(ss, m);
    const CMatrix back = read_matrix(ss);
    EXPECT_EQ(back, m);

    std::stringstream real_in("2 1 real\n1.25\n-3\n");
    const CMatrix r = read_matrix(real_in);
    ASSERT_EQ(r.rows(), 2u);
    EXPECT_EQ(r(1, 0), cplx(-3.0));
}

TEST(MatrixText, MalformedInput)
{
    std::stringstream bad_header("2 x real\n");
    EXPECT_THROW(read_matrix(bad_header), Error);
    std::stringstream truncated("2 2 real\n1\n2\n3\n");
    EXPECT_THROW(read_matrix(truncated), Error);
    std::stringstream bad_field("1 1 quaternion\n1\n");
    EXPECT_THROW(read_matrix(bad_field), Error);
}
