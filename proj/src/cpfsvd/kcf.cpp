#include "cpfsvd/kcf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "cpfsvd/matcore.hpp"

namespace cpfsvd {

size_t KcfBlock::row_dim() const
{
    switch (kind) {
    case KcfBlockKind::zero_block:
        return rows;
    case KcfBlockKind::l_right:
        return size;
    case KcfBlockKind::l_left:
        return size + 1;
    case KcfBlockKind::n_infinite:
    case KcfBlockKind::j_finite:
        return size;
    }
    return 0;
}

size_t KcfBlock::col_dim() const
{
    switch (kind) {
    case KcfBlockKind::zero_block:
        return cols;
    case KcfBlockKind::l_right:
        return size + 1;
    case KcfBlockKind::l_left:
        return size;
    case KcfBlockKind::n_infinite:
    case KcfBlockKind::j_finite:
        return size;
    }
    return 0;
}

size_t KcfStructure::rows() const
{
    size_t r = 0;
    for (const auto& b : blocks)
        r += b.row_dim();
    return r;
}

size_t KcfStructure::cols() const
{
    size_t c = 0;
    for (const auto& b : blocks)
        c += b.col_dim();
    return c;
}

size_t KcfStructure::infinite_count() const
{
    size_t k = 0;
    for (const auto& b : blocks)
        if (b.kind == KcfBlockKind::n_infinite)
            k += b.size;
    return k;
}

size_t KcfStructure::zero_count() const
{
    size_t k = 0;
    for (const auto& b : blocks)
        if (b.at_zero())
            k += b.size;
    return k;
}

size_t KcfStructure::finite_nonzero_count() const
{
    size_t k = 0;
    for (const auto& b : blocks)
        if (b.kind == KcfBlockKind::j_finite && !b.at_zero())
            k += b.size;
    return k;
}

size_t KcfStructure::indeterminate_count() const
{
    size_t k = 0;
    for (const auto& b : blocks)
        if (b.kind == KcfBlockKind::zero_block)
            k += std::min(b.rows, b.cols);
    return k;
}

unsigned KcfStructure::max_zero_index() const
{
    size_t v = 1;
    for (const auto& b : blocks)
        if (b.at_zero())
            v = std::max(v, b.size);
    return static_cast<unsigned>(v);
}

unsigned KcfStructure::max_infinite_index() const
{
    size_t v = 1;
    for (const auto& b : blocks)
        if (b.kind == KcfBlockKind::n_infinite)
            v = std::max(v, b.size);
    return static_cast<unsigned>(v);
}

std::string KcfStructure::describe() const
{
    std::map<std::string, size_t> counts;
    std::vector<std::string> order;
    char buf[128];
    for (const auto& b : blocks) {
        switch (b.kind) {
        case KcfBlockKind::zero_block:
            std::snprintf(buf, sizeof buf, "zero %zux%zu", b.rows, b.cols);
            break;
        case KcfBlockKind::l_right:
            std::snprintf(buf, sizeof buf, "L%zu", b.size);
            break;
        case KcfBlockKind::l_left:
            std::snprintf(buf, sizeof buf, "L%zu^T", b.size);
            break;
        case KcfBlockKind::n_infinite:
            std::snprintf(buf, sizeof buf, "N%zu", b.size);
            break;
        case KcfBlockKind::j_finite:
            if (b.at_zero())
                std::snprintf(buf, sizeof buf, "J%zu(0)", b.size);
            else if (!b.eigenvalue_known)
                std::snprintf(buf, sizeof buf, "J%zu(nonzero)", b.size);
            else
                std::snprintf(buf, sizeof buf, "J%zu(%.12g%+.12gi)", b.size, b.eigenvalue.real(), b.eigenvalue.imag());
            break;
        }
        if (counts[buf]++ == 0)
            order.emplace_back(buf);
    }
    std::string out;
    for (const auto& key : order)
        out += key + " x" + std::to_string(counts[key]) + "\n";
    return out;
}

ClassifyOptions classify_options_for(const KcfStructure& s)
{
    ClassifyOptions o;
    o.zero_index = s.max_zero_index();
    o.infinite_index = s.max_infinite_index();
    return o;
}

size_t RsvdPartition::p_total() const { return std::accumulate(p.begin(), p.end(), size_t{0}); }
size_t RsvdPartition::q_total() const { return std::accumulate(q.begin(), q.end(), size_t{0}); }
size_t RsvdPartition::m_total() const { return std::accumulate(m.begin(), m.end(), size_t{0}); }
size_t RsvdPartition::n_total() const { return std::accumulate(n.begin(), n.end(), size_t{0}); }

namespace {

size_t nonneg(long long v, const char* identity)
{
    if (v < 0)
        fail(ErrorCode::inconsistent_structure,
             std::string("inconsistent ranks: ") + identity + " = " + std::to_string(v) + " is negative");
    return static_cast<size_t>(v);
}

CMatrix hcat(const CMatrix& a, const CMatrix& b)
{
    CMatrix m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

CMatrix vcat(const CMatrix& a, const CMatrix& c)
{
    CMatrix m(a.rows() + c.rows(), a.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, c);
    return m;
}

size_t rank_of(const CMatrix& m, std::optional<double> tol)
{
    if (m.empty())
        return 0;
    return rank_with_tol(m, tol).rank;
}

} // namespace

RsvdPartition partition_from_ranks(size_t p, size_t q, size_t m, size_t n, const RankSet& r)
{
    using ll = long long;
    const ll a = static_cast<ll>(r.a), b = static_cast<ll>(r.b), c = static_cast<ll>(r.c);
    const ll ab = static_cast<ll>(r.ab), ac = static_cast<ll>(r.ac), abc = static_cast<ll>(r.abc);
    RsvdPartition s;
    s.ranks = r;
    s.p[0] = nonneg(abc + a - ab - ac, "p1 = rABC + rA - rAB - rAC");
    s.p[1] = nonneg(ac + b - abc, "p2 = rAC + rB - rABC");
    s.p[2] = nonneg(ab + c - abc, "p3 = rAB + rC - rABC");
    s.p[3] = nonneg(abc - b - c, "p4 = rABC - rB - rC");
    s.p[4] = nonneg(ab - a, "p5 = rAB - rA");
    s.p[5] = nonneg(static_cast<ll>(p) - ab, "p6 = p - rAB");
    s.q[0] = nonneg(static_cast<ll>(q) - ac, "q1 = q - rAC");
    s.q[1] = nonneg(ac - a, "q2 = rAC - rA");
    s.q[2] = s.p[0];
    s.q[3] = s.p[1];
    s.q[4] = s.p[2];
    s.q[5] = s.p[3];
    s.m[0] = s.p[0];
    s.m[1] = s.p[1];
    s.m[2] = nonneg(static_cast<ll>(m) - b, "m3 = m - rB");
    s.m[3] = s.p[4];
    s.n[0] = s.q[1];
    s.n[1] = s.p[0];
    s.n[2] = s.p[2];
    s.n[3] = nonneg(static_cast<ll>(n) - c, "n4 = n - rC");
    // the sums follow algebraically from the identities; a mismatch means the
    // ranks exceed the dimensions
    if (s.p_total() != p || s.q_total() != q || s.m_total() != m || s.n_total() != n)
        fail(ErrorCode::inconsistent_structure, "inconsistent ranks: partition does not sum to the dimensions");
    return s;
}

RsvdPartition partition_from_counts(const std::array<size_t, 6>& p, size_t q1, size_t q2, size_t m3, size_t n4)
{
    RankSet r;
    r.a = p[0] + p[1] + p[2] + p[3];
    r.b = p[0] + p[1] + p[4];
    r.c = q2 + p[0] + p[2];
    r.ab = r.a + p[4];
    r.ac = r.a + q2;
    r.abc = p[3] + r.b + r.c;
    const size_t np = p[0] + p[1] + p[2] + p[3] + p[4] + p[5];
    const size_t nq = q1 + q2 + r.a;
    return partition_from_ranks(np, nq, r.b + m3, r.c + n4, r);
}

RankSet compute_ranks(const CMatrix& a, const CMatrix& b, const CMatrix& c, std::optional<double> tol_rel)
{
    require(a.rows() == b.rows() && a.cols() == c.cols(), ErrorCode::dimension_mismatch,
            "compute_ranks: incompatible triplet dimensions");
    RankSet r;
    r.a = rank_of(a, tol_rel);
    r.b = rank_of(b, tol_rel);
    r.c = rank_of(c, tol_rel);
    r.ab = rank_of(hcat(a, b), tol_rel);
    r.ac = rank_of(vcat(a, c), tol_rel);
    CMatrix full(a.rows() + c.rows(), a.cols() + b.cols());
    full.set_block(0, 0, a);
    full.set_block(0, a.cols(), b);
    full.set_block(a.rows(), 0, c);
    r.abc = rank_of(full, tol_rel);
    return r;
}

RsvdPartition partition_from_matrices(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                                      std::optional<double> tol_rel)
{
    return partition_from_ranks(a.rows(), a.cols(), b.cols(), c.rows(), compute_ranks(a, b, c, tol_rel));
}

RsvdPartition partition_from_pair(const CMatrix& a, const CMatrix& c, std::optional<double> tol_rel)
{
    require(a.cols() == c.cols(), ErrorCode::dimension_mismatch, "partition_from_pair: A and C column counts differ");
    const size_t p = a.rows();
    RankSet r;
    r.a = rank_of(a, tol_rel);
    r.c = rank_of(c, tol_rel);
    r.ac = rank_of(vcat(a, c), tol_rel);
    r.b = p;
    r.ab = p;
    r.abc = p + r.c;
    return partition_from_ranks(p, a.cols(), p, c.rows(), r);
}

RsvdPartition partition_from_single(const CMatrix& a, std::optional<double> tol_rel)
{
    const size_t p = a.rows(), q = a.cols();
    RankSet r;
    r.a = rank_of(a, tol_rel);
    r.b = p;
    r.c = q;
    r.ab = p;
    r.ac = q;
    r.abc = p + q;
    return partition_from_ranks(p, q, p, q, r);
}

RsvdPartition embed(const QsvdPartition& s)
{
    const size_t p = s.p[0] + s.p[1] + s.p[2];
    const size_t q = s.q[0] + s.q[1] + s.q[2] + s.q[3];
    const size_t n = s.n[0] + s.n[1] + s.n[2];
    require(s.n[1] == s.p[0] && s.q[2] == s.p[0] && s.n[0] == s.q[1] && s.p[1] == s.q[3],
            ErrorCode::inconsistent_structure, "embed: pair partition violates n2 = p1 = q3, n1 = q2, p2 = q4");
    RankSet r;
    r.a = s.p[0] + s.p[1];
    r.c = s.n[0] + s.n[1];
    r.ac = q - s.q[0];
    r.b = p;
    r.ab = p;
    r.abc = p + r.c;
    return partition_from_ranks(p, q, p, n, r);
}

RsvdPartition embed(const OsvdPartition& s)
{
    require(s.p[0] == s.q[0], ErrorCode::inconsistent_structure, "embed: p1 must equal q1");
    const size_t p = s.p[0] + s.p[1], q = s.q[0] + s.q[1];
    RankSet r;
    r.a = s.p[0];
    r.b = p;
    r.c = q;
    r.ab = p;
    r.ac = q;
    r.abc = p + q;
    return partition_from_ranks(p, q, p, q, r);
}

QsvdPartition to_qsvd(const RsvdPartition& r)
{
    require(r.p[2] == 0 && r.p[3] == 0 && r.p[5] == 0 && r.m[2] == 0, ErrorCode::inconsistent_structure,
            "to_qsvd: partition does not come from a pair (A, I, C)");
    QsvdPartition s;
    s.p = {r.p[0], r.p[1], r.p[4]};
    s.q = {r.q[0], r.q[1], r.q[2], r.q[3]};
    s.n = {r.n[0], r.n[1], r.n[3]};
    return s;
}

OsvdPartition to_osvd(const RsvdPartition& r)
{
    const QsvdPartition s = to_qsvd(r);
    require(s.p[1] == 0 && s.q[0] == 0 && s.n[2] == 0, ErrorCode::inconsistent_structure,
            "to_osvd: partition does not come from a single matrix (A, I, I)");
    OsvdPartition o;
    o.p = {r.p[0], r.p[4]};
    o.q = {r.p[0], r.q[1]};
    return o;
}

KcfStructure predict_kcf(Formulation f, const RsvdPartition& r, std::span<const double> sigmas)
{
    const size_t p1 = r.p[0];
    require(sigmas.empty() || sigmas.size() == p1, ErrorCode::invalid_argument,
            "predict_kcf: expected " + std::to_string(p1) + " singular values, got " + std::to_string(sigmas.size()));
    KcfStructure s;
    auto zero_block = [&](size_t d) {
        if (d > 0)
            s.blocks.push_back({KcfBlockKind::zero_block, d, d, 0, {}, true});
    };
    auto n_blocks = [&](size_t size, size_t count) {
        for (size_t i = 0; i < count; ++i)
            s.blocks.push_back({KcfBlockKind::n_infinite, 0, 0, size, {}, true});
    };
    auto j_blocks = [&](size_t size, cplx z, bool known, size_t count) {
        for (size_t i = 0; i < count; ++i)
            s.blocks.push_back({KcfBlockKind::j_finite, 0, 0, size, known ? z : cplx(NAN, NAN), known});
    };
    const bool known = !sigmas.empty();
    auto sig = [&](size_t j) { return known ? sigmas[j] : 1.0; };

    switch (f) {
    case Formulation::cpf_svd:
    case Formulation::cpf_qsvd:
    case Formulation::cpf_rsvd:
        zero_block(r.p[5] + r.q[0]);
        n_blocks(1, r.p[3] + r.q[5] + r.m[2] + r.n[3]);
        n_blocks(3, r.p[1]);
        n_blocks(3, r.p[2]);
        j_blocks(2, 0.0, true, r.p[4] + r.q[1]);
        for (const cplx unit : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)})
            for (size_t j = 0; j < p1; ++j)
                j_blocks(1, unit * std::sqrt(sig(j)), known, 1);
        break;
    case Formulation::aug_svd:
    case Formulation::aug_qsvd:
    case Formulation::aug_rsvd:
        zero_block(r.p[5] + r.q[0]);
        n_blocks(1, r.p[3] + r.q[5]);
        n_blocks(2, r.p[1]);
        n_blocks(2, r.p[2]);
        j_blocks(1, 0.0, true, r.p[4] + r.q[1]);
        for (const double sign : {1.0, -1.0})
            for (size_t j = 0; j < p1; ++j)
                j_blocks(1, sign * sig(j), known, 1);
        break;
    case Formulation::sq_svd:
    case Formulation::sq_qsvd: {
        const QsvdPartition qs = to_qsvd(r);
        zero_block(qs.q[0]);
        j_blocks(1, 0.0, true, qs.q[1]);
        for (size_t j = 0; j < p1; ++j)
            j_blocks(1, sig(j) * sig(j), known, 1);
        n_blocks(1, qs.q[3]);
        break;
    }
    case Formulation::qqqq:
        fail(ErrorCode::invalid_argument, "predict_kcf: no structure theory for the qqqq pencil");
    }
    return s;
}

namespace {

const CMatrix& lemma_x()
{
    static const CMatrix x = [] {
        const cplx i(0, 1);
        CMatrix m{{1.0, -1.0, -i, i}, {1.0, -1.0, i, -i}, {1.0, 1.0, 1.0, 1.0}, {1.0, 1.0, -1.0, -1.0}};
        return m * cplx(0.5);
    }();
    return x;
}

const CMatrix& lemma_y()
{
    static const CMatrix y = [] {
        const cplx i(0, 1);
        CMatrix m{{1.0, 1.0, 1.0, 1.0}, {1.0, 1.0, -1.0, -1.0}, {1.0, -1.0, -i, i}, {1.0, -1.0, i, -i}};
        return m * cplx(0.5);
    }();
    return y;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b)
{
    double m = 0.0;
    for (size_t j = 0; j < a.cols(); ++j)
        for (size_t i = 0; i < a.rows(); ++i)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

} // namespace

LemmaReduction lemma_reduce(LemmaKind kind, double alpha, double beta, double gamma)
{
    if (kind == LemmaKind::osvd)
        beta = gamma = 1.0;
    else if (kind == LemmaKind::qsvd)
        beta = 1.0;
    require(alpha > 0.0 && beta > 0.0 && gamma > 0.0 && std::isfinite(alpha) && std::isfinite(beta) &&
                std::isfinite(gamma),
            ErrorCode::invalid_argument, "lemma_reduce: alpha, beta and gamma must be positive and finite");

    LemmaReduction out;
    const double s = alpha / (beta * gamma);
    out.sigma = s;
    const double rs = std::sqrt(s);
    const Formulation tags[] = {Formulation::cpf_svd, Formulation::cpf_qsvd, Formulation::cpf_rsvd};

    out.source.formulation = tags[static_cast<int>(kind)];
    out.source.layout.row_blocks = out.source.layout.col_blocks = {1, 1, 1, 1};
    out.source.lhs = CMatrix{{0.0, alpha, 0.0, 0.0}, {alpha, 0.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, 1.0}};
    out.source.rhs = CMatrix{{0.0, 0.0, beta, 0.0}, {0.0, 0.0, 0.0, gamma}, {beta, 0.0, 0.0, 0.0}, {0.0, gamma, 0.0, 0.0}};

    // The diagonal scaling brings the pencil to sqrt(s) [0 1; 1 0] (+) sqrt(s) I - lambda P
    // whatever the kind, after which the fixed unitary pair diagonalizes it.
    const double f = std::pow(s, -0.25);
    const cplx d[4] = {f / beta, f / gamma, f * rs, f * rs};
    CMatrix dm(4, 4);
    for (size_t k = 0; k < 4; ++k)
        dm(k, k) = d[k];
    out.x = dm * lemma_x();
    out.y = dm * lemma_y();

    out.target = out.source;
    out.target.lhs = CMatrix(4, 4);
    out.target.lhs(0, 0) = rs;
    out.target.lhs(1, 1) = -rs;
    out.target.lhs(2, 2) = cplx(0, rs);
    out.target.lhs(3, 3) = cplx(0, -rs);
    out.target.rhs = CMatrix::identity(4);

    const CMatrix yh = adjoint(out.y);
    out.error_constant = max_abs_diff(yh * out.source.lhs * out.x, out.target.lhs) / rs;
    out.error_lambda = max_abs_diff(yh * out.source.rhs * out.x, out.target.rhs);
    return out;
}

namespace {

enum class GroupPattern { zero, n1, n2, n3, j2_pair, j1_zero, sigma4, sigma2 };

struct GroupSpec {
    GroupPattern pattern;
    size_t blocks; ///< number of permutation entries consumed
};

struct ChainLayout {
    std::vector<size_t> sizes;
    std::vector<size_t> pi_x, pi_y; // 1-indexed as in the proofs
    std::vector<GroupSpec> groups;
    std::vector<const XMatrix*> stage0;
};

struct Group {
    GroupPattern pattern;
    size_t offset = 0;
    std::vector<size_t> sub;
    size_t size() const { return std::accumulate(sub.begin(), sub.end(), size_t{0}); }
};

void check_square(const XMatrix& m, size_t n, const char* name)
{
    require(m.rows() == n && m.cols() == n, ErrorCode::dimension_mismatch,
            std::string("verify_reduction: factor ") + name + " must be " + std::to_string(n) + "x" + std::to_string(n));
}

XMatrix reorder_columns(const XMatrix& m, size_t first)
{
    // moves the leading `first` columns behind the rest
    XMatrix r(m.rows(), m.cols());
    const size_t n = m.cols();
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < m.rows(); ++i)
            r(i, j) = m(i, (j + first) % n);
    return r;
}

std::vector<size_t> expand(const std::vector<size_t>& sizes, const std::vector<size_t>& pi)
{
    std::vector<size_t> offsets(sizes.size() + 1, 0);
    for (size_t b = 0; b < sizes.size(); ++b)
        offsets[b + 1] = offsets[b] + sizes[b];
    std::vector<size_t> idx;
    for (size_t b : pi)
        for (size_t k = 0; k < sizes[b - 1]; ++k)
            idx.push_back(offsets[b - 1] + k);
    return idx;
}

XMatrix congruence(const XMatrix& m, const XMatrix& t)
{
    return transpose(t) * m * t;
}

} // namespace

ReductionReport verify_reduction(const Pencil& pen, const ReductionFactors& f, const RsvdPartition& r)
{
    require(is_real(pen.lhs) && is_real(pen.rhs), ErrorCode::invalid_argument,
            "verify_reduction: extended-precision verification needs a real pencil");
    const size_t p1 = r.p[0];
    require(f.alpha.size() == p1 && f.beta.size() == p1 && f.gamma.size() == p1, ErrorCode::dimension_mismatch,
            "verify_reduction: expected " + std::to_string(p1) + " values of alpha, beta and gamma");

    ChainLayout L;
    XMatrix aug_y; // column-reordered V for aug-svd
    switch (pen.formulation) {
    case Formulation::cpf_svd: {
        const OsvdPartition o = to_osvd(r);
        L.sizes = {o.p[0], o.p[1], o.q[0], o.q[1], o.p[0], o.p[1], o.q[0], o.q[1]};
        L.pi_x = {2, 6, 4, 8, 1, 3, 5, 7};
        L.pi_y = {6, 2, 8, 4, 1, 3, 5, 7};
        L.groups = {{GroupPattern::j2_pair, 4}, {GroupPattern::sigma4, 4}};
        L.stage0 = {&f.u, &f.v, &f.u, &f.v};
        break;
    }
    case Formulation::cpf_qsvd: {
        const QsvdPartition s = to_qsvd(r);
        L.sizes = {s.p[0], s.p[1], s.p[2], s.q[0], s.q[1], s.q[2], s.q[3], s.p[0], s.p[1], s.p[2], s.n[0], s.n[1], s.n[2]};
        L.pi_x = {4, 13, 7, 9, 2, 3, 10, 5, 11, 1, 6, 8, 12};
        L.pi_y = {4, 13, 2, 9, 7, 10, 3, 11, 5, 1, 6, 8, 12};
        L.groups = {{GroupPattern::zero, 1},
                    {GroupPattern::n1, 1},
                    {GroupPattern::n3, 3},
                    {GroupPattern::j2_pair, 4},
                    {GroupPattern::sigma4, 4}};
        L.stage0 = {&f.u, &f.y, &f.u, &f.v};
        break;
    }
    case Formulation::cpf_rsvd:
        L.sizes.insert(L.sizes.end(), r.p.begin(), r.p.end());
        L.sizes.insert(L.sizes.end(), r.q.begin(), r.q.end());
        L.sizes.insert(L.sizes.end(), r.m.begin(), r.m.end());
        L.sizes.insert(L.sizes.end(), r.n.begin(), r.n.end());
        L.pi_x = {6, 7, 12, 4, 15, 20, 10, 14, 2, 3, 19, 11, 5, 16, 8, 17, 1, 9, 13, 18};
        L.pi_y = {6, 7, 4, 12, 15, 20, 2, 14, 10, 11, 19, 3, 16, 5, 17, 8, 1, 9, 13, 18};
        L.groups = {{GroupPattern::zero, 2}, {GroupPattern::n1, 4},      {GroupPattern::n3, 3},
                    {GroupPattern::n3, 3},   {GroupPattern::j2_pair, 4}, {GroupPattern::sigma4, 4}};
        L.stage0 = {&f.x, &f.y, &f.u, &f.v};
        break;
    case Formulation::aug_svd:
    case Formulation::aug_qsvd:
    case Formulation::aug_rsvd:
        L.sizes.insert(L.sizes.end(), r.p.begin(), r.p.end());
        L.sizes.insert(L.sizes.end(), r.q.begin(), r.q.end());
        L.pi_x = {6, 7, 12, 4, 10, 2, 3, 11, 5, 8, 1, 9};
        L.pi_y = {6, 7, 4, 12, 2, 10, 11, 3, 5, 8, 1, 9};
        L.groups = {{GroupPattern::zero, 2}, {GroupPattern::n1, 2},      {GroupPattern::n2, 2},
                    {GroupPattern::n2, 2},   {GroupPattern::j1_zero, 2}, {GroupPattern::sigma2, 2}};
        if (pen.formulation == Formulation::aug_rsvd) {
            L.stage0 = {&f.x, &f.y};
        } else if (pen.formulation == Formulation::aug_qsvd) {
            L.stage0 = {&f.u, &f.y};
        } else {
            // the triplet ordering puts the null columns of A before the range
            aug_y = reorder_columns(f.v, to_osvd(r).q[0]);
            L.stage0 = {&f.u, &aug_y};
        }
        break;
    default:
        fail(ErrorCode::invalid_argument,
             "verify_reduction: no transformation chain for " + std::string(to_string(pen.formulation)));
    }

    const size_t k = pen.dim();
    const size_t total = std::accumulate(L.sizes.begin(), L.sizes.end(), size_t{0});
    require(total == k, ErrorCode::dimension_mismatch,
            "verify_reduction: partition covers " + std::to_string(total) + " rows but the pencil has " +
                std::to_string(k));

    // stage 0: factor congruence, in extended precision
    const size_t nblk = L.stage0.size();
    XMatrix t0(k, k);
    {
        require(pen.layout.row_blocks.size() == nblk, ErrorCode::dimension_mismatch,
                "verify_reduction: pencil block layout does not match its formulation");
        size_t off = 0;
        for (size_t b = 0; b < nblk; ++b) {
            const size_t dim = pen.layout.row_blocks[b];
            check_square(*L.stage0[b], dim, "block");
            t0.set_block(off, off, *L.stage0[b]);
            off += dim;
        }
    }
    const XMatrix a1 = congruence(to_extended(real_part(pen.lhs)), t0);
    const XMatrix b1 = congruence(to_extended(real_part(pen.rhs)), t0);

    // stage 1: block permutations, then interleave the sigma group so that each
    // singular value owns a contiguous block
    std::vector<size_t> cols = expand(L.sizes, L.pi_x);
    std::vector<size_t> rows = expand(L.sizes, L.pi_y);

    std::vector<Group> groups;
    {
        size_t pos = 0, off = 0;
        for (const auto& g : L.groups) {
            Group grp{g.pattern, off, {}};
            for (size_t e = 0; e < g.blocks; ++e) {
                const size_t cs = L.sizes[L.pi_x[pos + e] - 1];
                const size_t rs = L.sizes[L.pi_y[pos + e] - 1];
                require(cs == rs, ErrorCode::inconsistent_structure,
                        "verify_reduction: partition sizes do not pair up under the permutations");
                grp.sub.push_back(cs);
            }
            pos += g.blocks;
            off += grp.size();
            groups.push_back(std::move(grp));
        }
    }
    const Group& sg = groups.back();
    const size_t width = sg.pattern == GroupPattern::sigma4 ? 4 : 2;
    {
        std::vector<size_t> rc(cols), rr(rows);
        for (size_t j = 0; j < p1; ++j)
            for (size_t w = 0; w < width; ++w) {
                cols[sg.offset + width * j + w] = rc[sg.offset + w * p1 + j];
                rows[sg.offset + width * j + w] = rr[sg.offset + w * p1 + j];
            }
    }
    CMatrix a2(k, k), b2(k, k);
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < k; ++i) {
            a2(i, j) = a1(rows[i], cols[j]).to_double();
            b2(i, j) = b1(rows[i], cols[j]).to_double();
        }

    // stage 2: per-sigma reductions on the diagonal of the last group
    CMatrix x2 = CMatrix::identity(k), y2 = CMatrix::identity(k);
    CMatrix ea(k, k), eb(k, k);
    for (size_t j = 0; j < p1; ++j) {
        const size_t o = sg.offset + width * j;
        if (width == 4) {
            const auto red = lemma_reduce(LemmaKind::rsvd, f.alpha[j], f.beta[j], f.gamma[j]);
            x2.set_block(o, o, red.x);
            y2.set_block(o, o, red.y);
            ea.set_block(o, o, red.target.lhs);
        } else {
            const double s = f.alpha[j] / (f.beta[j] * f.gamma[j]);
            const double h = std::sqrt(0.5);
            CMatrix t{{h / f.beta[j], h / f.beta[j]}, {h / f.gamma[j], -h / f.gamma[j]}};
            x2.set_block(o, o, t);
            y2.set_block(o, o, t);
            ea(o, o) = s;
            ea(o + 1, o + 1) = -s;
        }
        eb.set_block(o, o, CMatrix::identity(width));
    }
    const CMatrix a3 = adjoint(y2) * a2 * x2;
    const CMatrix b3 = adjoint(y2) * b2 * x2;

    // predicted form of the remaining groups
    for (const auto& g : groups) {
        const size_t o = g.offset, n = g.size();
        std::vector<size_t> sub_off(g.sub.size() + 1, o);
        for (size_t s = 0; s < g.sub.size(); ++s)
            sub_off[s + 1] = sub_off[s] + g.sub[s];
        auto put = [&](CMatrix& m, size_t bi, size_t bj) {
            for (size_t t = 0; t < g.sub[bi]; ++t)
                m(sub_off[bi] + t, sub_off[bj] + t) = 1.0;
        };
        switch (g.pattern) {
        case GroupPattern::zero:
            break;
        case GroupPattern::n1:
            ea.set_block(o, o, CMatrix::identity(n));
            break;
        case GroupPattern::n2:
            ea.set_block(o, o, CMatrix::identity(n));
            put(eb, 0, 1);
            break;
        case GroupPattern::n3:
            ea.set_block(o, o, CMatrix::identity(n));
            put(eb, 0, 1);
            put(eb, 1, 2);
            break;
        case GroupPattern::j2_pair:
            put(ea, 0, 1);
            put(ea, 2, 3);
            eb.set_block(o, o, CMatrix::identity(n));
            break;
        case GroupPattern::j1_zero:
            eb.set_block(o, o, CMatrix::identity(n));
            break;
        case GroupPattern::sigma4:
        case GroupPattern::sigma2:
            break;
        }
    }

    ReductionReport rep;
    rep.off_structure_constant = max_abs_diff(a3, ea);
    rep.off_structure_lambda = max_abs_diff(b3, eb);
    std::vector<size_t> owner(k);
    for (size_t g = 0; g < groups.size(); ++g)
        for (size_t t = 0; t < groups[g].size(); ++t)
            owner[groups[g].offset + t] = g;
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < k; ++i)
            if (owner[i] != owner[j])
                rep.off_block = std::max({rep.off_block, std::abs(a3(i, j)), std::abs(b3(i, j))});
    rep.scale = std::max(norm2(pen.lhs), norm2(pen.rhs));
    return rep;
}

bool SpectrumCountReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CountCheck& c) { return c.pass(); });
}

SpectrumCountReport spectrum_counts_check(const EigenSolution& sol, const KcfStructure& predicted)
{
    SpectrumCountReport r;
    r.checks[0] = {EigenClass::finite_nonzero, predicted.finite_nonzero_count(), sol.count(EigenClass::finite_nonzero)};
    r.checks[1] = {EigenClass::zero, predicted.zero_count(), sol.count(EigenClass::zero)};
    r.checks[2] = {EigenClass::infinite, predicted.infinite_count(), sol.count(EigenClass::infinite)};
    r.checks[3] = {EigenClass::indeterminate, predicted.indeterminate_count(), sol.count(EigenClass::indeterminate)};
    return r;
}

} // namespace cpfsvd
