#include <gtest/gtest.h>

#include "cpfsvd/error.hpp"
#include "cpfsvd/matcore.hpp"
#include "cpfsvd/pencils.hpp"

using namespace cpfsvd;

namespace {

CMatrix random_matrix(size_t r, size_t c, Rng& rng)
{
    std::normal_distribution<double> d;
    CMatrix m(r, c);
    for (size_t j = 0; j < c; ++j)
        for (size_t i = 0; i < r; ++i)
            m(i, j) = cplx(d(rng), d(rng));
    return m;
}

bool all_zero(const CMatrix& m)
{
    for (const auto& x : m.values())
        if (x != cplx(0.0))
            return false;
    return true;
}

} // namespace

TEST(Formulation, NamesRoundTrip)
{
    for (auto f : {Formulation::sq_svd, Formulation::aug_svd, Formulation::sq_qsvd, Formulation::aug_qsvd,
                   Formulation::aug_rsvd, Formulation::cpf_svd, Formulation::cpf_qsvd, Formulation::cpf_rsvd,
                   Formulation::qqqq})
        EXPECT_EQ(parse_formulation(to_string(f)), f);
    EXPECT_THROW(parse_formulation("cpf-gsvd"), Error);
    EXPECT_TRUE(is_cross_product_free(Formulation::cpf_rsvd));
    EXPECT_FALSE(is_cross_product_free(Formulation::aug_rsvd));
}

TEST(CpfRsvd, BlockPlacement)
{
    Rng rng(1);
    const size_t p = 3, q = 2, m = 4, n = 1;
    const CMatrix a = random_matrix(p, q, rng), b = random_matrix(p, m, rng), c = random_matrix(n, q, rng);
    const Pencil pen = build_cpf_rsvd(a, b, c);
    ASSERT_EQ(pen.dim(), p + q + m + n);
    EXPECT_EQ(pen.layout.row_blocks, (std::vector<size_t>{p, q, m, n}));
    const size_t o2 = p, o3 = p + q, o4 = p + q + m;
    // lhs = diag([0 A; A* 0], I, I)
    EXPECT_EQ(pen.lhs.block(0, o2, p, q), a);
    EXPECT_EQ(pen.lhs.block(o2, 0, q, p), adjoint(a));
    EXPECT_EQ(pen.lhs.block(o3, o3, m, m), CMatrix::identity(m));
    EXPECT_EQ(pen.lhs.block(o4, o4, n, n), CMatrix::identity(n));
    EXPECT_TRUE(all_zero(pen.lhs.block(0, 0, p, p)));
    EXPECT_TRUE(all_zero(pen.lhs.block(0, o3, p, m + n)));
    // rhs carries B, C*, B*, C and nothing else
    EXPECT_EQ(pen.rhs.block(0, o3, p, m), b);
    EXPECT_EQ(pen.rhs.block(o2, o4, q, n), adjoint(c));
    EXPECT_EQ(pen.rhs.block(o3, 0, m, p), adjoint(b));
    EXPECT_EQ(pen.rhs.block(o4, o2, n, q), c);
    EXPECT_TRUE(all_zero(pen.rhs.block(0, 0, p + q, p + q)));
    EXPECT_TRUE(all_zero(pen.rhs.block(o3, o3, m + n, m + n)));
    // both coefficients are Hermitian
    EXPECT_EQ(adjoint(pen.lhs), pen.lhs);
    EXPECT_EQ(adjoint(pen.rhs), pen.rhs);
}

TEST(CpfQsvd, IsTripletWithIdentityB)
{
    Rng rng(2);
    const CMatrix a = random_matrix(3, 4, rng), c = random_matrix(2, 4, rng);
    const Pencil pq = build_cpf_qsvd(a, c);
    const Pencil pr = build_cpf_rsvd(a, CMatrix::identity(3), c);
    EXPECT_EQ(pq.lhs, pr.lhs);
    EXPECT_EQ(pq.rhs, pr.rhs);
    EXPECT_EQ(pq.formulation, Formulation::cpf_qsvd);
    const Pencil ps = build_cpf_svd(a);
    EXPECT_EQ(ps.rhs, build_cpf_rsvd(a, CMatrix::identity(3), CMatrix::identity(4)).rhs);
}

TEST(Classical, SquaredAndAugmented)
{
    Rng rng(3);
    const CMatrix a = random_matrix(3, 2, rng), b = random_matrix(3, 3, rng), c = random_matrix(2, 2, rng);
    const Pencil sq = build_sq_qsvd(a, c);
    EXPECT_EQ(sq.lhs, adjoint(a) * a);
    EXPECT_EQ(sq.rhs, adjoint(c) * c);
    const Pencil aug = build_aug_rsvd(a, b, c);
    EXPECT_EQ(aug.lhs.block(0, 3, 3, 2), a);
    EXPECT_EQ(aug.rhs.block(0, 0, 3, 3), b * adjoint(b));
    EXPECT_EQ(aug.rhs.block(3, 3, 2, 2), adjoint(c) * c);
    EXPECT_TRUE(all_zero(aug.rhs.block(0, 3, 3, 2)));
    const Pencil svd = build_aug_svd(a);
    EXPECT_EQ(svd.rhs, CMatrix::identity(5));
}

TEST(Builders, DimensionChecks)
{
    Rng rng(4);
    const CMatrix a = random_matrix(3, 2, rng);
    EXPECT_THROW(build_cpf_qsvd(a, random_matrix(2, 3, rng)), Error);
    EXPECT_THROW(build_cpf_rsvd(a, random_matrix(2, 2, rng), random_matrix(1, 2, rng)), Error);
    EXPECT_THROW(build_sq_svd(CMatrix()), Error);
    EXPECT_THROW(build_qqqq(a, random_matrix(3, 2, rng), random_matrix(1, 2, rng), random_matrix(1, 3, rng),
                            random_matrix(1, 1, rng)),
                 Error);
}

TEST(Qqqq, TrailingBlocksAreGrams)
{
    Rng rng(5);
    const CMatrix a = random_matrix(2, 2, rng), b = random_matrix(2, 3, rng), c = random_matrix(2, 2, rng);
    const CMatrix d = random_matrix(4, 3, rng), e = random_matrix(2, 5, rng);
    const Pencil p = build_qqqq(a, b, c, d, e);
    EXPECT_EQ(p.lhs.block(4, 4, 3, 3), adjoint(d) * d);
    EXPECT_EQ(p.lhs.block(7, 7, 2, 2), e * adjoint(e));
}
