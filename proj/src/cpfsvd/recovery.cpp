#include "cpfsvd/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cpfsvd/matcore.hpp"

namespace cpfsvd {

std::string_view to_string(TripletClass c)
{
    switch (c) {
    case TripletClass::regular:
        return "regular";
    case TripletClass::one_one_zero:
        return "(1,1,0)";
    case TripletClass::one_zero_one:
        return "(1,0,1)";
    case TripletClass::one_zero_zero:
        return "(1,0,0)";
    case TripletClass::zero_one_one:
        return "(0,1,1)";
    case TripletClass::trivial:
        return "trivial";
    }
    return "unknown";
}

cplx quadrant_unit(size_t k)
{
    static const cplx units[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    return units[k & 3];
}

namespace {

size_t slot_of(cplx z)
{
    // nearest of the arguments 0, pi, pi/2, -pi/2
    if (std::abs(z.real()) >= std::abs(z.imag()))
        return z.real() >= 0.0 ? 0 : 1;
    return z.imag() >= 0.0 ? 2 : 3;
}

double norm(std::span<const cplx> v)
{
    double s = 0.0;
    for (const auto& x : v)
        s += std::norm(x);
    return std::sqrt(s);
}

std::vector<cplx> matvec(const CMatrix& a, std::span<const cplx> x)
{
    std::vector<cplx> y(a.rows());
    for (size_t j = 0; j < a.cols(); ++j)
        for (size_t i = 0; i < a.rows(); ++i)
            y[i] += a(i, j) * x[j];
    return y;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b)
{
    cplx s = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

} // namespace

std::vector<Quadruple> group_quadruples(std::span<const GeneralizedEigenvalue> values, const GroupingOptions& options)
{
    struct Item {
        size_t index;
        cplx lambda;
        cplx fourth;
        size_t slot;
        bool used = false;
    };
    std::vector<Item> items;
    for (size_t i = 0; i < values.size(); ++i)
        if (values[i].cls == EigenClass::finite_nonzero) {
            const cplx l = values[i].lambda();
            items.push_back({i, l, (l * l) * (l * l), slot_of(l)});
        }
    if (items.size() % 4 != 0)
        fail(ErrorCode::inconsistent_structure, "group_quadruples: " + std::to_string(items.size()) +
                                                    " finite nonzero eigenvalues is not a multiple of four");
    std::stable_sort(items.begin(), items.end(),
                     [](const Item& a, const Item& b) { return std::abs(a.lambda) > std::abs(b.lambda); });

    std::vector<Quadruple> out;
    for (auto& pivot : items) {
        if (pivot.used)
            continue;
        pivot.used = true;
        Quadruple q;
        q.members[pivot.slot] = pivot.index;
        const double scale = std::abs(pivot.fourth);
        for (size_t s = 0; s < 4; ++s) {
            if (s == pivot.slot)
                continue;
            Item* best = nullptr;
            double best_d = std::numeric_limits<double>::infinity();
            for (auto& it : items) {
                if (it.used || it.slot != s)
                    continue;
                const double d = std::abs(it.fourth - pivot.fourth);
                if (d < best_d) {
                    best_d = d;
                    best = &it;
                }
            }
            if (!best)
                fail(ErrorCode::inconsistent_structure,
                     "group_quadruples: no partner in quadrant " + std::to_string(s) + " for eigenvalue of modulus " +
                         std::to_string(std::abs(pivot.lambda)));
            if (best_d > options.rel_tol * scale)
                fail(ErrorCode::inconsistent_structure,
                     "group_quadruples: ambiguous grouping, relative spread of lambda^4 is " +
                         std::to_string(best_d / scale));
            best->used = true;
            q.members[s] = best->index;
        }
        double mags[4];
        for (size_t s = 0; s < 4; ++s) {
            const cplx l = values[q.members[s]].lambda();
            mags[s] = std::abs(l);
            q.phase_residual = std::max(q.phase_residual, std::abs(std::arg(l / quadrant_unit(s))));
        }
        if (q.phase_residual > options.max_phase)
            fail(ErrorCode::inconsistent_structure,
                 "group_quadruples: phase pattern violated by " + std::to_string(q.phase_residual) + " rad");
        q.sigma = geometric_mean_sigma(mags);
        out.push_back(q);
    }
    std::sort(out.begin(), out.end(), [](const Quadruple& a, const Quadruple& b) { return a.sigma > b.sigma; });
    return out;
}

double geometric_mean_sigma(std::span<const double> m)
{
    require(m.size() == 4, ErrorCode::invalid_argument, "geometric_mean_sigma: need four magnitudes");
    // pairwise products keep the intermediate in range for extreme magnitudes
    return std::sqrt(m[0] * m[1]) * std::sqrt(m[2] * m[3]);
}

double geometric_mean_sigma(std::span<const GeneralizedEigenvalue> values, const Quadruple& q)
{
    double m[4];
    for (size_t s = 0; s < 4; ++s)
        m[s] = std::abs(values[q.members[s]].lambda());
    return geometric_mean_sigma(m);
}

ClassifiedSpectrum classify_spectrum(const EigenSolution& sol, const Pencil& pen,
                                     const std::optional<RsvdPartition>& part, const GroupingOptions& options)
{
    require(is_cross_product_free(pen.formulation), ErrorCode::invalid_argument,
            "classify_spectrum: needs a cross-product-free pencil, got " + std::string(to_string(pen.formulation)));
    const size_t nf = sol.count(EigenClass::finite_nonzero);
    const size_t nz = sol.count(EigenClass::zero);
    const size_t ni = sol.count(EigenClass::infinite);
    const size_t nd = sol.count(EigenClass::indeterminate);

    ClassifiedSpectrum out;
    out.quadruples = group_quadruples(sol.values, options);
    if (nz % 2 != 0)
        fail(ErrorCode::inconsistent_structure,
             "classify_spectrum: odd number (" + std::to_string(nz) + ") of zero eigenvalues; expected J2(0) pairs");
    const size_t j2 = nz / 2;
    size_t n3_b = 0, n3_c = 0, n1 = 0;

    if (part) {
        const auto& r = *part;
        const size_t want_inf = r.p[3] + r.q[5] + r.m[2] + r.n[3] + 3 * (r.p[1] + r.p[2]);
        if (nf != 4 * r.p[0] || nz != 2 * (r.p[4] + r.q[1]) || nd != r.p[5] + r.q[0] || ni != want_inf)
            fail(ErrorCode::inconsistent_structure,
                 "classify_spectrum: spectrum counts (finite " + std::to_string(nf) + ", zero " + std::to_string(nz) +
                     ", infinite " + std::to_string(ni) + ", indeterminate " + std::to_string(nd) +
                     ") disagree with the rank partition");
        n3_b = r.p[1];
        n3_c = r.p[2];
        n1 = r.p[3] + r.q[5] + r.m[2] + r.n[3];
        out.min_p5_q2 = std::min(r.p[4], r.q[1]);
    } else if (pen.formulation == Formulation::cpf_svd) {
        if (ni != 0)
            fail(ErrorCode::inconsistent_structure, "classify_spectrum: cpf-svd pencil cannot have infinite eigenvalues");
    } else if (pen.formulation == Formulation::cpf_qsvd) {
        using ll = long long;
        const ll p = static_cast<ll>(pen.layout.row_blocks.at(0));
        const ll q = static_cast<ll>(pen.layout.row_blocks.at(1));
        const ll twice_p2 = p + q - static_cast<ll>(nd) - 2 * static_cast<ll>(nf / 4) - static_cast<ll>(j2);
        const ll p2 = twice_p2 / 2;
        const ll p3 = p - static_cast<ll>(nf / 4) - p2;
        const ll rest = static_cast<ll>(ni) - 3 * p2;
        if (twice_p2 < 0 || twice_p2 % 2 != 0 || p3 < 0 || static_cast<ll>(j2) < p3 || rest < 0)
            fail(ErrorCode::inconsistent_structure,
                 "classify_spectrum: spectrum counts do not fit any pair structure of these dimensions");
        n3_b = static_cast<size_t>(p2);
        n1 = static_cast<size_t>(rest);
    } else if (ni > 0) {
        fail(ErrorCode::invalid_argument,
             "classify_spectrum: separating N1 from N3 blocks of a triplet needs the rank partition");
    }

    auto add = [&](TripletClass c, double a, double b, double g, double s, size_t count) {
        for (size_t i = 0; i < count; ++i)
            out.triplets.push_back({c, a, b, g, s, 0.0});
        out.class_counts[static_cast<size_t>(c)] += count;
    };
    for (const auto& q : out.quadruples) {
        const double s = q.sigma;
        const double h = 1.0 / std::sqrt(1.0 + s * s);
        out.triplets.push_back({TripletClass::regular, s * h, 1.0, h, s, q.phase_residual});
        ++out.class_counts[0];
    }
    const double inf = std::numeric_limits<double>::infinity();
    add(TripletClass::one_one_zero, 1, 1, 0, inf, n3_b);
    add(TripletClass::one_zero_one, 1, 0, 1, inf, n3_c);
    add(TripletClass::one_zero_zero, 1, 0, 0, inf, n1);
    add(TripletClass::zero_one_one, 0, 1, 1, 0.0, j2);
    add(TripletClass::trivial, 0, 0, 0, std::numeric_limits<double>::quiet_NaN(), nd);
    out.zero_jordan_blocks = j2;
    return out;
}

RecoveredVectors extract_vectors(const Pencil& pen, const EigenSolution& sol, const Quadruple& quad)
{
    require(is_cross_product_free(pen.formulation) && pen.layout.row_blocks.size() == 4, ErrorCode::invalid_argument,
            "extract_vectors: needs a cross-product-free pencil");
    require(sol.has_vectors(), ErrorCode::invalid_argument, "extract_vectors: solution carries no eigenvectors");
    const size_t p = pen.layout.row_blocks[0], q = pen.layout.row_blocks[1];
    const size_t m = pen.layout.row_blocks[2], n = pen.layout.row_blocks[3];
    const CMatrix a = pen.lhs.block(0, p, p, q);
    const CMatrix b = pen.rhs.block(0, p + q, p, m);
    const CMatrix c = pen.rhs.block(p + q + m, p, n, q);
    const double na = std::max(norm2(a), std::numeric_limits<double>::min());
    const double nc = std::max(norm2(c), std::numeric_limits<double>::min());
    const double s = quad.sigma;
    const double rs = std::sqrt(s);

    std::optional<RecoveredVectors> best;
    double best_score = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < 4; ++k) {
        const auto w = sol.vectors.column(quad.members[k]);
        const double nw = norm(w);
        const auto w1 = w.subspan(0, p), w2 = w.subspan(p, q), w3 = w.subspan(p + q, m), w4 = w.subspan(p + q + m, n);
        const double n3 = norm(w3);
        if (!(nw > 0.0) || n3 <= 1e-13 * nw)
            continue;
        // w = t (w^-1 x, w z, sqrt(s) u, w^2 sqrt(s) v) for slot unit w and global scale t
        const cplx om = quadrant_unit(k);
        RecoveredVectors r;
        r.sigma = s;
        r.member = k;
        r.u.assign(w3.begin(), w3.end());
        double umax = 0.0;
        for (auto& x : r.u) {
            x /= n3;
            umax = std::max(umax, std::abs(x));
        }
        cplx phase = 1.0;
        for (const auto& x : r.u)
            if (std::abs(x) > 1e-6 * umax) {
                phase = std::conj(x) / std::abs(x);
                break;
            }
        for (auto& x : r.u)
            x *= phase;
        const cplx inv_t = phase * rs / n3; // 1 / t
        r.v.resize(n);
        for (size_t i = 0; i < n; ++i)
            r.v[i] = w4[i] * inv_t / (om * om * rs);
        const double nv = norm(r.v);
        if (nv > 0.0)
            for (auto& x : r.v)
                x /= nv;
        r.z.resize(q);
        for (size_t i = 0; i < q; ++i)
            r.z[i] = w2[i] * inv_t / om;
        r.x.resize(p);
        for (size_t i = 0; i < p; ++i)
            r.x[i] = w1[i] * inv_t * om;

        // least-squares rescaling of z against A z = s B u and C z = v
        const auto az = matvec(a, r.z), cz = matvec(c, r.z);
        auto bu = matvec(b, r.u);
        for (auto& x : bu)
            x *= s;
        const double gg = dot(az, az).real() + dot(cz, cz).real();
        if (!(gg > 0.0))
            continue;
        const cplx zeta = (dot(az, bu) + dot(cz, r.v)) / gg;
        for (auto& x : r.z)
            x *= zeta;
        double ra = 0.0, rc = 0.0;
        for (size_t i = 0; i < p; ++i)
            ra += std::norm(zeta * az[i] - bu[i]);
        for (size_t i = 0; i < n; ++i)
            rc += std::norm(zeta * cz[i] - r.v[i]);
        r.residual_a = std::sqrt(ra);
        r.residual_c = std::sqrt(rc);
        const double nz = norm(r.z);
        const double score = std::max(r.residual_a / (na * nz), r.residual_c / (nc * nz));
        if (score < best_score) {
            best_score = score;
            best = std::move(r);
        }
    }
    if (!best)
        fail(ErrorCode::solver_failure, "extract_vectors: no quadruple member has a usable eigenvector");
    return *best;
}

std::vector<double> estimate_sigmas(const EigenSolution& sol, Formulation f, const GroupingOptions& options)
{
    std::vector<double> out;
    switch (f) {
    case Formulation::sq_svd:
    case Formulation::sq_qsvd:
        for (const auto& v : sol.values)
            if (v.cls == EigenClass::finite_nonzero)
                out.push_back(std::sqrt(std::abs(v.lambda())));
        break;
    case Formulation::aug_svd:
    case Formulation::aug_qsvd:
    case Formulation::aug_rsvd: {
        std::vector<double> pos, neg;
        for (const auto& v : sol.values)
            if (v.cls == EigenClass::finite_nonzero) {
                const cplx l = v.lambda();
                (l.real() >= 0.0 ? pos : neg).push_back(std::abs(l));
            }
        std::sort(pos.rbegin(), pos.rend());
        std::sort(neg.rbegin(), neg.rend());
        if (pos.size() != neg.size()) {
            // no clean +- split: pair consecutive magnitudes instead
            pos.insert(pos.end(), neg.begin(), neg.end());
            std::sort(pos.rbegin(), pos.rend());
            if (pos.size() % 2 != 0)
                fail(ErrorCode::inconsistent_structure, "estimate_sigmas: odd number of augmented eigenvalues");
            for (size_t i = 0; i < pos.size(); i += 2)
                out.push_back(std::sqrt(pos[i] * pos[i + 1]));
        } else {
            for (size_t i = 0; i < pos.size(); ++i)
                out.push_back(std::sqrt(pos[i] * neg[i]));
        }
        break;
    }
    case Formulation::cpf_svd:
    case Formulation::cpf_qsvd:
    case Formulation::cpf_rsvd:
        for (const auto& q : group_quadruples(sol.values, options))
            out.push_back(q.sigma);
        break;
    case Formulation::qqqq:
        fail(ErrorCode::invalid_argument, "estimate_sigmas: qqqq pencils have no singular value recovery");
    }
    std::sort(out.rbegin(), out.rend());
    return out;
}

} // namespace cpfsvd
