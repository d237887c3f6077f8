// End-to-end checks, one line per criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cpfsvd/bench.hpp"
#include "cpfsvd/error.hpp"

using namespace cpfsvd;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double max_abs_diff(const CMatrix& a, const CMatrix& b)
{
    double m = 0.0;
    for (size_t j = 0; j < a.cols(); ++j)
        for (size_t i = 0; i < a.rows(); ++i)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

double vec_norm(const std::vector<cplx>& v)
{
    double s = 0.0;
    for (const auto& x : v)
        s += std::norm(x);
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------

Outcome lemma_identities()
{
    Rng rng(101);
    std::uniform_real_distribution<double> logs(std::log(1e-3), std::log(1e3));
    std::uniform_real_distribution<double> logb(std::log(0.5), std::log(2.0));
    double worst = 0.0;
    const cplx I(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const LemmaKind kind = static_cast<LemmaKind>(t % 3);
        const double sigma = std::exp(logs(rng));
        double beta = 1.0, gamma = 1.0, alpha = sigma;
        if (kind != LemmaKind::osvd) {
            if (kind == LemmaKind::rsvd)
                beta = std::exp(logb(rng));
            alpha = sigma / std::sqrt(1.0 + sigma * sigma);
            gamma = 1.0 / (beta * std::sqrt(1.0 + sigma * sigma));
        }
        const LemmaReduction r = lemma_reduce(kind, alpha, beta, gamma);
        // independent target: diag(s, -s, i s, -i s) - lambda I with s = sqrt(alpha / (beta gamma))
        const double s = std::sqrt(alpha / (beta * gamma));
        CMatrix t0(4, 4);
        t0(0, 0) = s;
        t0(1, 1) = -s;
        t0(2, 2) = I * s;
        t0(3, 3) = -I * s;
        const CMatrix yh = adjoint(r.y);
        const double e0 = max_abs_diff(yh * r.source.lhs * r.x, t0) / s;
        const double e1 = max_abs_diff(yh * r.source.rhs * r.x, CMatrix::identity(4));
        worst = std::max({worst, e0, e1});
    }
    return {worst <= 1e-14, "max relative entry error " + fmt("%.3e", worst) + " over 1000 inputs"};
}

Outcome kcf_counts()
{
    const std::pair<Formulation, ProblemKind> cases[] = {
        {Formulation::sq_svd, ProblemKind::svd},    {Formulation::aug_svd, ProblemKind::svd},
        {Formulation::cpf_svd, ProblemKind::svd},   {Formulation::sq_qsvd, ProblemKind::qsvd},
        {Formulation::aug_qsvd, ProblemKind::qsvd}, {Formulation::cpf_qsvd, ProblemKind::qsvd},
        {Formulation::aug_rsvd, ProblemKind::rsvd}, {Formulation::cpf_rsvd, ProblemKind::rsvd},
    };
    size_t total = 0, bad = 0;
    std::string first_bad;
    std::array<size_t, 10> seen{}; // how often each free count was positive
    for (const auto& [f, kind] : cases) {
        Rng rng(7000 + static_cast<unsigned>(f));
        for (int t = 0; t < 20; ++t) {
            const RsvdPartition part = random_partition(kind, 2, rng);
            const GeneratedProblem g = generate_structured(kind, part, 10.0, rng());
            const KcfStructure k = predict_kcf(f, part);
            const Pencil pen = build_pencil(f, g);
            const EigenSolution sol = solve_general(pen, false, classify_options_for(k));
            const SpectrumCountReport rep = spectrum_counts_check(sol, k);
            ++total;
            if (kind == ProblemKind::rsvd) {
                const size_t free[10] = {part.p[0], part.p[1], part.p[2], part.p[3], part.p[4],
                                         part.p[5], part.q[0], part.q[1], part.m[2], part.n[3]};
                for (size_t i = 0; i < 10; ++i)
                    seen[i] += free[i] > 0;
            }
            if (!rep.all_pass()) {
                ++bad;
                if (first_bad.empty()) {
                    std::ostringstream o;
                    o << to_string(f) << " template " << t << ":";
                    for (const auto& c : rep.checks)
                        o << ' ' << to_string(c.cls) << ' ' << c.observed << '/' << c.predicted;
                    first_bad = o.str();
                }
            }
        }
    }
    const bool coverage = std::all_of(seen.begin(), seen.end(), [](size_t s) { return s > 0; });
    std::string d = std::to_string(total - bad) + "/" + std::to_string(total) + " templates match";
    if (!coverage)
        d += ", some rsvd block counts never exercised";
    if (!first_bad.empty())
        d += "; first mismatch " + first_bad;
    return {bad == 0 && coverage, d};
}

Outcome reduction_verification()
{
    Rng rng(303);
    std::uniform_int_distribution<size_t> dn(2, 8);
    std::uniform_real_distribution<double> dk(0.0, 3.0);
    double worst = 0.0;
    size_t bad = 0;
    for (int t = 0; t < 20; ++t) {
        GeneratorConfig cfg;
        cfg.n = dn(rng);
        cfg.kappa_x = std::pow(10.0, dk(rng));
        cfg.kappa_y = std::pow(10.0, dk(rng));
        cfg.kappa_sigma = std::pow(10.0, dk(rng));
        cfg.seed = rng();
        const bool triplet = t % 2 == 1;
        const GeneratedProblem g = triplet ? generate_rsvd(cfg) : generate_qsvd(cfg);
        const Formulation forms[2] = {triplet ? Formulation::cpf_rsvd : Formulation::cpf_qsvd,
                                      triplet ? Formulation::aug_rsvd : Formulation::aug_qsvd};
        for (Formulation f : forms) {
            const ReductionReport r = verify_reduction(build_pencil(f, g), g.factors(), g.partition);
            worst = std::max(worst, r.off_structure() / r.scale);
            bad += !r.passes(1e-10);
        }
    }
    return {bad == 0, "max off-structure / scale " + fmt("%.3e", worst) + " over 20 problems (cpf and aug forms)"};
}

Outcome worked_example_accuracy()
{
    std::vector<double> sq, aug, cpf;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        GeneratorConfig cfg;
        cfg.n = 4;
        cfg.kappa_y = 1e7;
        cfg.kappa_sigma = 10.0;
        cfg.seed = seed;
        const GeneratedProblem g = generate_qsvd(cfg);
        const ExperimentRecord rs = evaluate(g, Formulation::sq_qsvd, cfg);
        const ExperimentRecord ra = evaluate(g, Formulation::aug_qsvd, cfg);
        const ExperimentRecord rc = evaluate(g, Formulation::cpf_qsvd, cfg);
        if (rs.failed || ra.failed || rc.failed)
            return {false, "sample failed at seed " + std::to_string(seed)};
        sq.push_back(rs.max_error);
        aug.push_back(ra.max_error);
        cpf.push_back(rc.max_error);
    }
    const double ms = median(sq), ma = median(aug), mc = median(cpf);
    const bool ok = mc <= 1e-8 && ms >= 1e-6 && ma >= 1e-6 && mc <= 1e-2 * ma;
    return {ok, "median max error sq " + fmt("%.2e", ms) + ", aug " + fmt("%.2e", ma) + ", cpf " + fmt("%.2e", mc)};
}

std::string cells(const SweepSummary& s, Formulation f)
{
    std::string out = std::string(to_string(f)) + " [";
    for (double v : s.grid)
        out += (out.back() == '[' ? "" : " ") + fmt("%.1e", s.cell(v, f).median_max_error);
    return out + "]";
}

size_t failures(const SweepSummary& s)
{
    size_t n = 0;
    for (const auto& c : s.cells)
        n += c.failures;
    return n;
}

Outcome qsvd_kappa_y_sweep()
{
    SweepConfig c;
    c.kind = ProblemKind::qsvd;
    c.axis = SweepAxis::kappa_y;
    c.grid = decade_grid(1, 7);
    c.samples = 100;
    c.n = 10;
    c.kappa_sigma = 10.0;
    c.formulations = {Formulation::sq_qsvd, Formulation::aug_qsvd, Formulation::cpf_qsvd};
    c.seed = 505;
    const SweepSummary s = run_sweep(c);
    bool ok = failures(s) == 0;
    for (double v : c.grid)
        if (v >= 1e4)
            ok = ok && s.cell(v, Formulation::cpf_qsvd).median_max_error <=
                           s.cell(v, Formulation::aug_qsvd).median_max_error;
    const double sa = loglog_slope(s, Formulation::aug_qsvd), sc = loglog_slope(s, Formulation::cpf_qsvd);
    ok = ok && sa - sc >= 0.5;
    return {ok, "slopes aug " + fmt("%.2f", sa) + ", cpf " + fmt("%.2f", sc) + "; " + cells(s, Formulation::aug_qsvd) +
                    " " + cells(s, Formulation::cpf_qsvd) + "; failures " + std::to_string(failures(s))};
}

Outcome qsvd_kappa_sigma_sweep()
{
    SweepConfig c;
    c.kind = ProblemKind::qsvd;
    c.axis = SweepAxis::kappa_sigma;
    c.grid = decade_grid(1, 13, 2);
    c.samples = 100;
    c.n = 10;
    c.kappa_y = 10.0;
    c.formulations = {Formulation::sq_qsvd, Formulation::aug_qsvd, Formulation::cpf_qsvd};
    c.seed = 606;
    const SweepSummary s = run_sweep(c);
    bool ok = failures(s) == 0;
    double worst = 0.0;
    for (double v : c.grid)
        worst = std::max(worst, s.cell(v, Formulation::cpf_qsvd).median_max_error);
    const double growth = s.cell(1e13, Formulation::sq_qsvd).median_max_error /
                          s.cell(1e1, Formulation::sq_qsvd).median_max_error;
    ok = ok && worst <= 1e-11 && growth >= 1e3;
    return {ok, "cpf worst " + fmt("%.2e", worst) + ", sq growth " + fmt("%.2e", growth) + "; " +
                    cells(s, Formulation::sq_qsvd) + " " + cells(s, Formulation::cpf_qsvd) + "; failures " +
                    std::to_string(failures(s))};
}

Outcome rsvd_sweeps()
{
    SweepConfig left;
    left.kind = ProblemKind::rsvd;
    left.axis = SweepAxis::kappa_y;
    left.grid = decade_grid(1, 7);
    left.samples = 100;
    left.n = 10;
    left.kappa_x = 10.0;
    left.kappa_sigma = 10.0;
    left.formulations = {Formulation::aug_rsvd, Formulation::cpf_rsvd};
    left.seed = 707;
    const SweepSummary sl = run_sweep(left);

    SweepConfig right = left;
    right.axis = SweepAxis::kappa_sigma;
    right.grid = decade_grid(1, 13, 2);
    right.kappa_y = 10.0;
    right.seed = 708;
    const SweepSummary sr = run_sweep(right);

    bool ok = failures(sl) == 0 && failures(sr) == 0;
    for (double v : left.grid)
        if (v >= 1e4)
            ok = ok && sl.cell(v, Formulation::cpf_rsvd).median_max_error <=
                           sl.cell(v, Formulation::aug_rsvd).median_max_error;
    double worst = 0.0;
    for (double v : right.grid)
        worst = std::max(worst, sr.cell(v, Formulation::cpf_rsvd).median_max_error);
    ok = ok && worst <= 1e-10;
    return {ok, "kappa_Y panel " + cells(sl, Formulation::aug_rsvd) + " " + cells(sl, Formulation::cpf_rsvd) +
                    "; kappa_Sigma panel cpf worst " + fmt("%.2e", worst) + "; failures " +
                    std::to_string(failures(sl) + failures(sr))};
}

Outcome property_suites()
{
    std::vector<std::string> bad;
    Rng rng(808);

    // chordal metric axioms
    {
        std::uniform_real_distribution<double> le(std::log(1e-8), std::log(1e8));
        bool ok = chordal(0.0, 1.0) == 1.0 / std::sqrt(2.0) && chordal(INFINITY, INFINITY) == 0.0;
        for (int t = 0; t < 2000 && ok; ++t) {
            const double a = std::exp(le(rng)), b = std::exp(le(rng));
            const double d = chordal(a, b);
            ok = d == chordal(b, a) && chordal(a, a) == 0.0 && d > 0.0 && d <= 1.0 &&
                 std::abs(d - chordal_reciprocal(a, b)) <= 4 * 2.220446049250313e-16 &&
                 std::abs(chordal(a, INFINITY) - 1.0 / std::sqrt(1.0 + a * a)) <= 1e-16;
        }
        if (!ok)
            bad.push_back("chordal");
    }

    // quadruple grouping on synthetic spectra with repeated sigma
    {
        bool ok = true;
        std::uniform_real_distribution<double> le(std::log(1e-2), std::log(1e2));
        std::uniform_real_distribution<double> noise(-1e-12, 1e-12);
        for (int t = 0; t < 200 && ok; ++t) {
            std::vector<double> sig;
            const size_t k = 1 + rng() % 6;
            for (size_t j = 0; j < k; ++j)
                sig.push_back(std::exp(le(rng)));
            const size_t dup = rng() % 3;
            for (size_t j = 0; j < dup; ++j)
                sig.push_back(sig[rng() % k]);
            std::vector<GeneralizedEigenvalue> vals;
            for (double s : sig)
                for (size_t w = 0; w < 4; ++w) {
                    GeneralizedEigenvalue e;
                    e.alpha = std::sqrt(s) * quadrant_unit(w) * cplx(1.0 + noise(rng), noise(rng));
                    e.beta = 1.0;
                    vals.push_back(e);
                }
            std::shuffle(vals.begin(), vals.end(), rng);
            const auto quads = group_quadruples(vals);
            std::sort(sig.rbegin(), sig.rend());
            ok = quads.size() == sig.size();
            std::vector<int> used(vals.size(), 0);
            for (size_t j = 0; ok && j < quads.size(); ++j) {
                ok = std::abs(quads[j].sigma - sig[j]) <= 1e-10 * sig[j];
                for (size_t w = 0; w < 4; ++w) {
                    const size_t idx = quads[j].members[w];
                    ok = ok && ++used[idx] == 1 &&
                         std::abs(vals[idx].lambda() / std::sqrt(sig[j]) - quadrant_unit(w)) < 1e-9;
                }
            }
        }
        if (!ok)
            bad.push_back("grouping");
    }

    // Haar unitarity
    {
        double worst = 0.0;
        for (size_t n : {1, 2, 5, 17, 40}) {
            const CMatrix q = haar_unitary(n, rng);
            worst = std::max(worst, max_abs_diff(adjoint(q) * q, CMatrix::identity(n)));
            const RMatrix o = haar_orthogonal(n, rng);
            worst = std::max(worst, max_abs_diff(to_complex(transpose(o) * o), CMatrix::identity(n)));
        }
        if (worst > 1e-13)
            bad.push_back("haar " + fmt("%.1e", worst));
    }

    // partition identities on rank-randomized triplets
    {
        size_t fails = 0;
        for (int t = 0; t < 100; ++t) {
            const RsvdPartition want = random_partition(ProblemKind::rsvd, 2, rng);
            const GeneratedProblem g = generate_structured(ProblemKind::rsvd, want, 10.0, rng());
            const RsvdPartition got = partition_from_matrices(g.a, g.b, g.c);
            const auto& p = got.p;
            const auto& q = got.q;
            const auto& m = got.m;
            const auto& n = got.n;
            const bool ident = q[2] == p[0] && q[3] == p[1] && q[4] == p[2] && q[5] == p[3] && m[0] == p[0] &&
                               m[1] == p[1] && m[3] == p[4] && n[0] == q[1] && n[1] == p[0] && n[2] == p[2] &&
                               got.p_total() == g.a.rows() && got.q_total() == g.a.cols() &&
                               got.m_total() == g.b.cols() && got.n_total() == g.c.rows() &&
                               got.ranks.a == p[0] + p[1] + p[2] + p[3] && got.ranks.b == p[0] + p[1] + p[4] &&
                               got.ranks.c == q[1] + p[0] + p[2];
            fails += !(ident && got.p == want.p && got.q == want.q && got.m == want.m && got.n == want.n);
        }
        if (fails)
            bad.push_back("partition (" + std::to_string(fails) + " of 100)");
    }

    // sigma grid symmetry
    {
        bool ok = true;
        for (size_t n = 2; n <= 12 && ok; ++n)
            for (double k : {1.0, 10.0, 1e7, 1e13}) {
                const auto s = true_sigma_grid(n, k);
                for (size_t j = 0; j < n; ++j)
                    ok = ok && std::abs((s[j] * s[n - 1 - j]).to_double() - 1.0) <= 1e-15;
                ok = ok && std::abs((s.front() / s.back()).to_double() - k) <= 1e-14 * k;
            }
        if (!ok)
            bad.push_back("sigma grid");
    }

    std::string d = "chordal, grouping, haar, partition, sigma-grid";
    if (!bad.empty()) {
        d = "failed:";
        for (const auto& b : bad)
            d += " " + b;
    }
    return {bad.empty(), d};
}

Outcome eigenvector_residuals()
{
    Rng rng(909);
    std::uniform_int_distribution<size_t> dn(2, 8);
    std::uniform_real_distribution<double> dk(0.0, 3.0);
    double worst_a = 0.0, worst_c = 0.0;
    size_t triplets = 0;
    for (int t = 0; t < 20; ++t) {
        GeneratorConfig cfg;
        cfg.n = dn(rng);
        cfg.kappa_y = std::pow(10.0, dk(rng));
        cfg.kappa_sigma = std::pow(10.0, dk(rng));
        cfg.seed = rng();
        const GeneratedProblem g = generate_qsvd(cfg);
        const Pencil pen = build_cpf_qsvd(g.a, g.c);
        const EigenSolution sol = solve_for(pen, g.partition, true);
        const ClassifiedSpectrum cs = classify_spectrum(sol, pen, g.partition);
        const double na = norm2(g.a), nc = norm2(g.c);
        for (const auto& q : cs.quadruples) {
            const RecoveredVectors r = extract_vectors(pen, sol, q);
            std::vector<cplx> ra(g.a.rows()), rc(g.c.rows());
            for (size_t i = 0; i < g.a.rows(); ++i) {
                cplx s = 0.0;
                for (size_t j = 0; j < g.a.cols(); ++j)
                    s += g.a(i, j) * r.z[j];
                ra[i] = s - r.sigma * r.u[i];
            }
            for (size_t i = 0; i < g.c.rows(); ++i) {
                cplx s = 0.0;
                for (size_t j = 0; j < g.c.cols(); ++j)
                    s += g.c(i, j) * r.z[j];
                rc[i] = s - r.v[i];
            }
            const double nz = vec_norm(r.z);
            worst_a = std::max(worst_a, vec_norm(ra) / (na * nz));
            worst_c = std::max(worst_c, vec_norm(rc) / (nc * nz));
            ++triplets;
        }
    }
    const bool ok = worst_a <= 1e-8 && worst_c <= 1e-8 && triplets > 0;
    return {ok, std::to_string(triplets) + " triplets, max ||Az - s u||/(||A|| ||z||) " + fmt("%.2e", worst_a) +
                    ", max ||Cz - v||/(||C|| ||z||) " + fmt("%.2e", worst_c)};
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"lemma identities", lemma_identities},
        {"KCF spectrum counts", kcf_counts},
        {"reduction verification", reduction_verification},
        {"worked example accuracy", worked_example_accuracy},
        {"QSVD kappa_Y sweep", qsvd_kappa_y_sweep},
        {"QSVD kappa_Sigma sweep", qsvd_kappa_sigma_sweep},
        {"RSVD sweeps", rsvd_sweeps},
        {"property suites", property_suites},
        {"eigenvector residuals", eigenvector_residuals},
    };
    int failed = 0;
    int id = 0;
    for (const auto& [name, run] : criteria) {
        ++id;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d %s: %s (%s) [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed;
}
