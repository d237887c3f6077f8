#include "cpfsvd/pencils.hpp"

#include <array>
#include <numeric>

namespace cpfsvd {

namespace {

constexpr std::array<std::pair<Formulation, std::string_view>, 9> kNames{{
    {Formulation::sq_svd, "sq-svd"},
    {Formulation::aug_svd, "aug-svd"},
    {Formulation::sq_qsvd, "sq-qsvd"},
    {Formulation::aug_qsvd, "aug-qsvd"},
    {Formulation::aug_rsvd, "aug-rsvd"},
    {Formulation::cpf_svd, "cpf-svd"},
    {Formulation::cpf_qsvd, "cpf-qsvd"},
    {Formulation::cpf_rsvd, "cpf-rsvd"},
    {Formulation::qqqq, "qqqq"},
}};

void require_nonempty(const CMatrix& a, const char* who)
{
    require(a.rows() > 0 && a.cols() > 0, ErrorCode::invalid_argument, std::string(who) + ": A must be nonempty");
}

void require_same_cols(const CMatrix& a, const CMatrix& c, const char* who)
{
    require(a.cols() == c.cols(), ErrorCode::dimension_mismatch,
            std::string(who) + ": A has " + std::to_string(a.cols()) + " columns but C has " +
                std::to_string(c.cols()));
}

void require_same_rows(const CMatrix& a, const CMatrix& b, const char* who)
{
    require(a.rows() == b.rows(), ErrorCode::dimension_mismatch,
            std::string(who) + ": A has " + std::to_string(a.rows()) + " rows but B has " + std::to_string(b.rows()));
}

Pencil make(Formulation f, CMatrix lhs, CMatrix rhs, std::vector<size_t> blocks)
{
    Pencil p;
    p.lhs = std::move(lhs);
    p.rhs = std::move(rhs);
    p.formulation = f;
    p.layout.row_blocks = blocks;
    p.layout.col_blocks = std::move(blocks);
    return p;
}

/// [0 A; A* 0]
CMatrix hermitian_embedding(const CMatrix& a)
{
    const size_t p = a.rows(), q = a.cols();
    CMatrix m(p + q, p + q);
    m.set_block(0, p, a);
    m.set_block(p, 0, adjoint(a));
    return m;
}

/// Shared 4x4 block assembly. lhs = diag([0 A; A* 0], lower_left, lower_right),
/// rhs has B in (1,3), C* in (2,4), B* in (3,1) and C in (4,2).
Pencil assemble_four_block(Formulation f, const CMatrix& a, const CMatrix& b, const CMatrix& c,
                           const CMatrix& lower3, const CMatrix& lower4)
{
    const size_t p = a.rows(), q = a.cols(), m = b.cols(), n = c.rows();
    const size_t k = p + q + m + n;
    CMatrix lhs(k, k), rhs(k, k);
    lhs.set_block(0, p, a);
    lhs.set_block(p, 0, adjoint(a));
    lhs.set_block(p + q, p + q, lower3);
    lhs.set_block(p + q + m, p + q + m, lower4);
    rhs.set_block(0, p + q, b);
    rhs.set_block(p, p + q + m, adjoint(c));
    rhs.set_block(p + q, 0, adjoint(b));
    rhs.set_block(p + q + m, p, c);
    return make(f, std::move(lhs), std::move(rhs), {p, q, m, n});
}

} // namespace

std::string_view to_string(Formulation f)
{
    for (const auto& [key, name] : kNames)
        if (key == f)
            return name;
    return "unknown";
}

Formulation parse_formulation(std::string_view name)
{
    for (const auto& [key, text] : kNames)
        if (text == name)
            return key;
    fail(ErrorCode::invalid_argument, "unknown formulation '" + std::string(name) + "'");
}

bool is_cross_product_free(Formulation f)
{
    return f == Formulation::cpf_svd || f == Formulation::cpf_qsvd || f == Formulation::cpf_rsvd;
}

size_t BlockLayout::row_offset(size_t b) const
{
    return std::accumulate(row_blocks.begin(), row_blocks.begin() + static_cast<std::ptrdiff_t>(b), size_t{0});
}

size_t BlockLayout::col_offset(size_t b) const
{
    return std::accumulate(col_blocks.begin(), col_blocks.begin() + static_cast<std::ptrdiff_t>(b), size_t{0});
}

Pencil build_sq_svd(const CMatrix& a)
{
    require_nonempty(a, "build_sq_svd");
    return make(Formulation::sq_svd, adjoint(a) * a, CMatrix::identity(a.cols()), {a.cols()});
}

Pencil build_aug_svd(const CMatrix& a)
{
    require_nonempty(a, "build_aug_svd");
    const size_t k = a.rows() + a.cols();
    return make(Formulation::aug_svd, hermitian_embedding(a), CMatrix::identity(k), {a.rows(), a.cols()});
}

Pencil build_sq_qsvd(const CMatrix& a, const CMatrix& c)
{
    require_nonempty(a, "build_sq_qsvd");
    require_same_cols(a, c, "build_sq_qsvd");
    return make(Formulation::sq_qsvd, adjoint(a) * a, adjoint(c) * c, {a.cols()});
}

Pencil build_aug_qsvd(const CMatrix& a, const CMatrix& c)
{
    require_nonempty(a, "build_aug_qsvd");
    require_same_cols(a, c, "build_aug_qsvd");
    const size_t p = a.rows(), q = a.cols();
    CMatrix rhs(p + q, p + q);
    rhs.set_block(0, 0, CMatrix::identity(p));
    rhs.set_block(p, p, adjoint(c) * c);
    return make(Formulation::aug_qsvd, hermitian_embedding(a), std::move(rhs), {p, q});
}

Pencil build_aug_rsvd(const CMatrix& a, const CMatrix& b, const CMatrix& c)
{
    require_nonempty(a, "build_aug_rsvd");
    require_same_rows(a, b, "build_aug_rsvd");
    require_same_cols(a, c, "build_aug_rsvd");
    const size_t p = a.rows(), q = a.cols();
    CMatrix rhs(p + q, p + q);
    rhs.set_block(0, 0, b * adjoint(b));
    rhs.set_block(p, p, adjoint(c) * c);
    return make(Formulation::aug_rsvd, hermitian_embedding(a), std::move(rhs), {p, q});
}

Pencil build_cpf_svd(const CMatrix& a)
{
    require_nonempty(a, "build_cpf_svd");
    const size_t p = a.rows(), q = a.cols();
    return assemble_four_block(Formulation::cpf_svd, a, CMatrix::identity(p), CMatrix::identity(q),
                               CMatrix::identity(p), CMatrix::identity(q));
}

Pencil build_cpf_qsvd(const CMatrix& a, const CMatrix& c)
{
    require_nonempty(a, "build_cpf_qsvd");
    require_same_cols(a, c, "build_cpf_qsvd");
    const size_t p = a.rows();
    return assemble_four_block(Formulation::cpf_qsvd, a, CMatrix::identity(p), c, CMatrix::identity(p),
                               CMatrix::identity(c.rows()));
}

Pencil build_cpf_rsvd(const CMatrix& a, const CMatrix& b, const CMatrix& c)
{
    require_nonempty(a, "build_cpf_rsvd");
    require_same_rows(a, b, "build_cpf_rsvd");
    require_same_cols(a, c, "build_cpf_rsvd");
    return assemble_four_block(Formulation::cpf_rsvd, a, b, c, CMatrix::identity(b.cols()),
                               CMatrix::identity(c.rows()));
}

Pencil build_qqqq(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d, const CMatrix& e)
{
    require_nonempty(a, "build_qqqq");
    require_same_rows(a, b, "build_qqqq");
    require_same_cols(a, c, "build_qqqq");
    require(d.cols() == b.cols(), ErrorCode::dimension_mismatch,
            "build_qqqq: D must have as many columns as B (" + std::to_string(b.cols()) + ")");
    require(e.rows() == c.rows(), ErrorCode::dimension_mismatch,
            "build_qqqq: E must have as many rows as C (" + std::to_string(c.rows()) + ")");
    return assemble_four_block(Formulation::qqqq, a, b, c, adjoint(d) * d, e * adjoint(e));
}

} // namespace cpfsvd
