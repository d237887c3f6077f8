#include "cpfsvd/eigensolve.hpp"

#include <cmath>
#include <limits>

#include "cpfsvd/lapack.hpp"
#include "cpfsvd/matcore.hpp"

namespace cpfsvd {

std::string_view to_string(EigenClass c)
{
    switch (c) {
    case EigenClass::finite_nonzero:
        return "finite";
    case EigenClass::zero:
        return "zero";
    case EigenClass::infinite:
        return "infinite";
    case EigenClass::indeterminate:
        return "indeterminate";
    }
    return "unknown";
}

cplx GeneralizedEigenvalue::lambda() const
{
    switch (cls) {
    case EigenClass::infinite:
        return {std::numeric_limits<double>::infinity(), 0.0};
    case EigenClass::indeterminate:
        return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    case EigenClass::zero:
        return beta != cplx(0.0) ? alpha / beta : cplx(0.0);
    case EigenClass::finite_nonzero:
        break;
    }
    return alpha / beta;
}

size_t EigenSolution::count(EigenClass c) const
{
    size_t n = 0;
    for (const auto& v : values)
        n += v.cls == c;
    return n;
}

double classification_tolerance(size_t k, unsigned index, const ClassifyOptions& options)
{
    if (options.tolerance)
        return *options.tolerance;
    const double base = static_cast<double>(std::max<size_t>(k, 1)) * kUnitRoundoff;
    if (index <= 1)
        return base;
    return std::pow(base, 1.0 / static_cast<double>(index));
}

void classify(EigenSolution& sol, double tolerance_zero, double tolerance_infinite)
{
    sol.tolerance_zero = tolerance_zero;
    sol.tolerance_infinite = tolerance_infinite;
    const double cut0 = tolerance_zero * sol.scale;
    const double cut_inf = tolerance_infinite * sol.scale;
    for (auto& v : sol.values) {
        const bool small_alpha = std::abs(v.alpha) <= cut0;
        const bool small_beta = std::abs(v.beta) <= cut_inf;
        if (small_alpha && small_beta)
            v.cls = EigenClass::indeterminate;
        else if (small_beta)
            v.cls = EigenClass::infinite;
        else if (small_alpha)
            v.cls = EigenClass::zero;
        else
            v.cls = EigenClass::finite_nonzero;
    }
}

void classify(EigenSolution& sol, size_t k, const ClassifyOptions& options)
{
    classify(sol, classification_tolerance(k, options.zero_index, options),
             classification_tolerance(k, options.infinite_index, options));
}

bool is_hermitian(const CMatrix& m, double rel_tol)
{
    if (!m.is_square())
        return false;
    const double cut = rel_tol * max_abs(m);
    for (size_t j = 0; j < m.cols(); ++j)
        for (size_t i = 0; i <= j; ++i)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > cut)
                return false;
    return true;
}

namespace {

// Bases of the common right and left null spaces of lhs and rhs, i.e. the
// L0 and L0^T blocks of a singular pencil. QZ applied to a pencil with such
// blocks that is regular only through rounding returns arbitrary pairs, so
// they are split off before the eigensolve.
struct CommonNull {
    size_t dim = 0;
    CMatrix right_range, right_null; ///< columns of V
    CMatrix left_range;              ///< columns of U
};

CommonNull common_null_space(const Pencil& p)
{
    const size_t k = p.dim();
    CMatrix stacked(2 * k, k), side(k, 2 * k);
    stacked.set_block(0, 0, p.lhs);
    stacked.set_block(k, 0, p.rhs);
    side.set_block(0, 0, p.lhs);
    side.set_block(0, k, p.rhs);
    const auto rs = lapack::svd(stacked);
    const auto ls = lapack::svd(side);
    const double cut = 10.0 * static_cast<double>(k) * kUnitRoundoff * std::max(rs.s.empty() ? 0.0 : rs.s[0], 1e-300);
    auto rank = [&](const std::vector<double>& s) {
        size_t r = 0;
        while (r < s.size() && s[r] > cut)
            ++r;
        return r;
    };
    const size_t dr = k - rank(rs.s), dl = k - rank(ls.s);
    CommonNull out;
    if (dr == 0 || dr != dl)
        return out;
    out.dim = dr;
    const CMatrix v = adjoint(rs.vh);
    out.right_range = v.block(0, 0, k, k - dr);
    out.right_null = v.block(0, k - dr, k, dr);
    out.left_range = ls.u.block(0, 0, k, k - dr);
    return out;
}

} // namespace

EigenSolution solve_general(const Pencil& p, bool want_vectors, const ClassifyOptions& options)
{
    require(p.lhs.is_square(), ErrorCode::dimension_mismatch, "solve_general: pencil is not square");
    const size_t k = p.dim();
    EigenSolution sol;
    sol.backward_stable = true;
    sol.scale = std::max(norm_fro(p.lhs), norm_fro(p.rhs));
    if (k == 0)
        return sol;

    const CommonNull cn = common_null_space(p);
    CMatrix lhs = p.lhs, rhs = p.rhs;
    if (cn.dim > 0) {
        const CMatrix wh = adjoint(cn.left_range);
        lhs = wh * p.lhs * cn.right_range;
        rhs = wh * p.rhs * cn.right_range;
    }
    sol.deflated = cn.dim;
    if (lhs.rows() > 0) {
        auto r = lapack::ggev(std::move(lhs), std::move(rhs), want_vectors);
        for (size_t i = 0; i < r.alpha.size(); ++i)
            sol.values.push_back({r.alpha[i], r.beta[i], EigenClass::finite_nonzero});
        if (want_vectors)
            sol.vectors = cn.dim > 0 ? cn.right_range * r.right_vectors : std::move(r.right_vectors);
    }
    if (cn.dim > 0) {
        for (size_t i = 0; i < cn.dim; ++i)
            sol.values.push_back({cplx(0.0), cplx(0.0), EigenClass::indeterminate});
        if (want_vectors) {
            CMatrix all(k, k);
            if (k > cn.dim)
                all.set_block(0, 0, sol.vectors);
            all.set_block(0, k - cn.dim, cn.right_null);
            sol.vectors = std::move(all);
        }
    }
    classify(sol, k, options);
    return sol;
}

EigenSolution solve_hpd(const Pencil& p, bool want_vectors, const ClassifyOptions& options)
{
    require(p.lhs.is_square(), ErrorCode::dimension_mismatch, "solve_hpd: pencil is not square");
    require(is_hermitian(p.lhs, 64 * kUnitRoundoff) && is_hermitian(p.rhs, 64 * kUnitRoundoff),
            ErrorCode::not_definite, "solve_hpd: pencil matrices are not Hermitian; use solve_general");
    auto r = lapack::hegv(p.lhs, p.rhs, want_vectors);
    EigenSolution sol;
    // report homogeneous pairs on the scale of the rhs so that the shared
    // classification thresholds apply
    const double rhs_scale = std::max(norm_fro(p.rhs), std::numeric_limits<double>::min());
    sol.values.resize(r.values.size());
    for (size_t i = 0; i < r.values.size(); ++i) {
        sol.values[i].alpha = r.values[i] * rhs_scale;
        sol.values[i].beta = rhs_scale;
    }
    sol.vectors = std::move(r.vectors);
    sol.backward_stable = false;
    sol.scale = std::max(norm_fro(p.lhs), norm_fro(p.rhs));
    classify(sol, p.dim(), options);
    return sol;
}

double relative_residual(const Pencil& p, cplx lambda, std::span<const cplx> w)
{
    const size_t k = p.dim();
    require(w.size() == k, ErrorCode::dimension_mismatch, "relative_residual: vector has wrong length");
    double rnorm = 0.0, wnorm = 0.0;
    for (size_t i = 0; i < k; ++i) {
        cplx s = 0.0;
        for (size_t j = 0; j < k; ++j)
            s += (p.lhs(i, j) - lambda * p.rhs(i, j)) * w[j];
        rnorm += std::norm(s);
        wnorm += std::norm(w[i]);
    }
    const double denom = (norm2(p.lhs) + std::abs(lambda) * norm2(p.rhs)) * std::sqrt(wnorm);
    return denom > 0.0 ? std::sqrt(rnorm) / denom : 0.0;
}

} // namespace cpfsvd
