#include "cpfsvd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "cpfsvd/error.hpp"

namespace cpfsvd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median(std::vector<double> v)
{
    if (v.empty())
        return std::numeric_limits<double>::quiet_NaN();
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1)
        return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

GeneratorConfig cell_config(const SweepConfig& c, double value)
{
    GeneratorConfig g;
    g.n = c.n;
    g.kappa_x = c.kappa_x;
    g.kappa_y = c.kappa_y;
    g.kappa_sigma = c.kappa_sigma;
    switch (c.axis) {
    case SweepAxis::kappa_y: g.kappa_y = value; break;
    case SweepAxis::kappa_sigma: g.kappa_sigma = value; break;
    case SweepAxis::kappa_xy: g.kappa_x = g.kappa_y = value; break;
    }
    return g;
}

} // namespace

double chordal(double a, double b)
{
    if (std::isinf(a) && std::isinf(b))
        return 0.0;
    if (std::isinf(a))
        return 1.0 / std::sqrt(1.0 + b * b);
    if (std::isinf(b))
        return 1.0 / std::sqrt(1.0 + a * a);
    return std::abs(a - b) / (std::sqrt(1.0 + a * a) * std::sqrt(1.0 + b * b));
}

double chordal_reciprocal(double a, double b)
{
    const double ra = a == 0.0 ? kInf : 1.0 / a;
    const double rb = b == 0.0 ? kInf : 1.0 / b;
    return chordal(ra, rb);
}

int matched_digits(double exact, double approx)
{
    const double err = std::abs(exact - approx);
    int d = 0;
    while (d < 20 && err < 5.0 * std::pow(10.0, -(d + 2)))
        ++d;
    return d;
}

bool applies_to(Formulation f, ProblemKind kind)
{
    switch (kind) {
    case ProblemKind::svd:
        return f == Formulation::sq_svd || f == Formulation::aug_svd || f == Formulation::cpf_svd;
    case ProblemKind::qsvd:
        return f == Formulation::sq_qsvd || f == Formulation::aug_qsvd || f == Formulation::cpf_qsvd;
    case ProblemKind::rsvd:
        return f == Formulation::aug_rsvd || f == Formulation::cpf_rsvd;
    }
    return false;
}

Pencil build_pencil(Formulation f, const GeneratedProblem& g)
{
    require(applies_to(f, g.kind), ErrorCode::invalid_argument,
            std::string(to_string(f)) + " does not apply to " + std::string(to_string(g.kind)) + " problems");
    switch (f) {
    case Formulation::sq_svd: return build_sq_svd(g.a);
    case Formulation::aug_svd: return build_aug_svd(g.a);
    case Formulation::cpf_svd: return build_cpf_svd(g.a);
    case Formulation::sq_qsvd: return build_sq_qsvd(g.a, g.c);
    case Formulation::aug_qsvd: return build_aug_qsvd(g.a, g.c);
    case Formulation::cpf_qsvd: return build_cpf_qsvd(g.a, g.c);
    case Formulation::aug_rsvd: return build_aug_rsvd(g.a, g.b, g.c);
    case Formulation::cpf_rsvd: return build_cpf_rsvd(g.a, g.b, g.c);
    default: break;
    }
    fail(ErrorCode::invalid_argument, "build_pencil: unsupported formulation");
}

EigenSolution solve_for(const Pencil& pen, const RsvdPartition& part, bool want_vectors)
{
    const ClassifyOptions opts = classify_options_for(predict_kcf(pen.formulation, part));
    const bool aug = pen.formulation == Formulation::aug_svd || pen.formulation == Formulation::aug_qsvd ||
                     pen.formulation == Formulation::aug_rsvd;
    if (aug) {
        try {
            return solve_hpd(pen, want_vectors, opts);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::not_definite)
                throw;
        }
    }
    return solve_general(pen, want_vectors, opts);
}

GeneratedProblem generate(ProblemKind kind, const GeneratorConfig& cfg)
{
    switch (kind) {
    case ProblemKind::qsvd: return generate_qsvd(cfg);
    case ProblemKind::rsvd: return generate_rsvd(cfg);
    case ProblemKind::svd: break;
    }
    fail(ErrorCode::invalid_argument, "generate: sweeps support the qsvd and rsvd kinds only");
}

ExperimentRecord evaluate(const GeneratedProblem& g, Formulation f, const GeneratorConfig& cfg)
{
    ExperimentRecord r;
    r.kind = g.kind;
    r.formulation = f;
    r.n = cfg.n;
    r.kappa_x = cfg.kappa_x;
    r.kappa_y = cfg.kappa_y;
    r.kappa_sigma = cfg.kappa_sigma;
    r.seed = cfg.seed;
    try {
        const Pencil pen = build_pencil(f, g);
        const EigenSolution sol = solve_for(pen, g.partition, false);
        r.estimates = estimate_sigmas(sol, f);
    } catch (const Error& e) {
        r.failed = true;
        r.failure = e.what();
        return r;
    }
    if (r.estimates.size() != g.sigma.size()) {
        r.failed = true;
        r.failure = "recovered " + std::to_string(r.estimates.size()) + " singular values, expected " +
                    std::to_string(g.sigma.size());
        return r;
    }
    r.errors.resize(g.sigma.size());
    for (size_t j = 0; j < g.sigma.size(); ++j)
        r.errors[j] = chordal(g.sigma[j].to_double(), r.estimates[j]);
    r.max_error = *std::max_element(r.errors.begin(), r.errors.end());
    return r;
}

ExperimentRecord run_sample(ProblemKind kind, Formulation f, const GeneratorConfig& cfg)
{
    require(applies_to(f, kind), ErrorCode::invalid_argument,
            std::string(to_string(f)) + " does not apply to " + std::string(to_string(kind)) + " problems");
    return evaluate(generate(kind, cfg), f, cfg);
}

std::string_view to_string(SweepAxis a)
{
    switch (a) {
    case SweepAxis::kappa_y: return "kappa_y";
    case SweepAxis::kappa_sigma: return "kappa_sigma";
    case SweepAxis::kappa_xy: return "kappa_xy";
    }
    return "?";
}

SweepAxis parse_sweep_axis(std::string_view s)
{
    if (s == "kappa_y")
        return SweepAxis::kappa_y;
    if (s == "kappa_sigma")
        return SweepAxis::kappa_sigma;
    if (s == "kappa_xy")
        return SweepAxis::kappa_xy;
    fail(ErrorCode::invalid_argument, "unknown sweep axis '" + std::string(s) + "'");
}

const SweepCell& SweepSummary::cell(double axis_value, Formulation f) const
{
    for (const auto& c : cells)
        if (c.axis_value == axis_value && c.formulation == f)
            return c;
    fail(ErrorCode::invalid_argument, "SweepSummary: no cell for " + std::string(to_string(f)) + " at " +
                                          fmt("%g", axis_value));
}

std::uint64_t sample_seed(std::uint64_t base, size_t cell, size_t sample)
{
    return splitmix64(splitmix64(splitmix64(base) ^ static_cast<std::uint64_t>(cell)) ^
                      static_cast<std::uint64_t>(sample));
}

SweepSummary run_sweep(const SweepConfig& cfg)
{
    require(!cfg.grid.empty(), ErrorCode::invalid_argument, "run_sweep: empty grid");
    require(cfg.samples >= 1, ErrorCode::invalid_argument, "run_sweep: need at least one sample per cell");
    require(!cfg.formulations.empty(), ErrorCode::invalid_argument, "run_sweep: no formulations");
    for (Formulation f : cfg.formulations)
        require(applies_to(f, cfg.kind), ErrorCode::invalid_argument,
                std::string(to_string(f)) + " does not apply to " + std::string(to_string(cfg.kind)) + " sweeps");

    const size_t nf = cfg.formulations.size();
    const size_t total = cfg.grid.size() * cfg.samples;
    // records[(cell * samples + s) * nf + k]
    std::vector<ExperimentRecord> records(total * nf);

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t job; (job = next.fetch_add(1)) < total;) {
            const size_t c = job / cfg.samples, s = job % cfg.samples;
            GeneratorConfig g = cell_config(cfg, cfg.grid[c]);
            g.seed = sample_seed(cfg.seed, c, s);
            GeneratedProblem prob;
            try {
                prob = generate(cfg.kind, g);
            } catch (const Error& e) {
                for (size_t k = 0; k < nf; ++k) {
                    auto& r = records[job * nf + k];
                    r.failed = true;
                    r.failure = e.what();
                }
                continue;
            }
            for (size_t k = 0; k < nf; ++k)
                records[job * nf + k] = evaluate(prob, cfg.formulations[k], g);
        }
    };
    unsigned nt = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<size_t>(nt, total));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < nt; ++t)
            pool.emplace_back(worker);
        worker();
    }

    SweepSummary out;
    out.axis = cfg.axis;
    out.kind = cfg.kind;
    out.grid = cfg.grid;
    for (size_t c = 0; c < cfg.grid.size(); ++c)
        for (size_t k = 0; k < nf; ++k) {
            SweepCell cell;
            cell.axis_value = cfg.grid[c];
            cell.formulation = cfg.formulations[k];
            cell.config = cell_config(cfg, cfg.grid[c]);
            cell.samples = cfg.samples;
            std::vector<double> maxima;
            for (size_t s = 0; s < cfg.samples; ++s) {
                const auto& r = records[(c * cfg.samples + s) * nf + k];
                if (r.failed)
                    ++cell.failures;
                else
                    maxima.push_back(r.max_error);
            }
            cell.median_max_error = median(std::move(maxima));
            out.cells.push_back(cell);
        }
    return out;
}

void write_sweep_csv(std::ostream& out, const SweepSummary& s)
{
    out << "kind,formulation,axis,axis_value,n,kappa_x,kappa_y,kappa_sigma,samples,failures,median_max_chordal_error\n";
    for (const auto& c : s.cells) {
        const double kx = s.kind == ProblemKind::rsvd ? c.config.kappa_x : 1.0;
        out << to_string(s.kind) << ',' << to_string(c.formulation) << ',' << to_string(s.axis) << ','
            << fmt("%.16e", c.axis_value) << ',' << c.config.n << ',' << fmt("%.16e", kx) << ','
            << fmt("%.16e", c.config.kappa_y) << ',' << fmt("%.16e", c.config.kappa_sigma) << ',' << c.samples << ','
            << c.failures << ',' << fmt("%.16e", c.median_max_error) << '\n';
    }
}

std::vector<double> decade_grid(int lo, int hi, int step)
{
    require(step > 0 && lo <= hi, ErrorCode::invalid_argument, "decade_grid: need lo <= hi and a positive step");
    std::vector<double> g;
    for (int e = lo; e <= hi; e += step)
        g.push_back(std::pow(10.0, e));
    return g;
}

double loglog_slope(const SweepSummary& s, Formulation f, double from)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t k = 0;
    for (const auto& c : s.cells) {
        if (c.formulation != f || c.axis_value < from || !(c.median_max_error > 0.0))
            continue;
        const double x = std::log10(c.axis_value), y = std::log10(c.median_max_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    require(k >= 2, ErrorCode::invalid_argument, "loglog_slope: fewer than two usable cells");
    const double kd = static_cast<double>(k);
    return (kd * sxy - sx * sy) / (kd * sxx - sx * sx);
}

WorkedExample worked_example(std::uint64_t seed)
{
    WorkedExample w;
    w.config.n = 4;
    w.config.kappa_y = 1e7;
    w.config.kappa_sigma = 10.0;
    w.config.seed = seed;
    const GeneratedProblem g = generate_qsvd(w.config);
    w.exact = g.sigma;

    {
        const Pencil pen = build_sq_qsvd(g.a, g.c);
        w.sq = estimate_sigmas(solve_for(pen, g.partition), pen.formulation);
    }
    {
        const Pencil pen = build_aug_qsvd(g.a, g.c);
        const EigenSolution sol = solve_for(pen, g.partition);
        for (const auto& v : sol.values)
            if (v.cls == EigenClass::finite_nonzero)
                w.aug_magnitudes.push_back(std::abs(v.lambda()));
        std::sort(w.aug_magnitudes.rbegin(), w.aug_magnitudes.rend());
        w.aug = estimate_sigmas(sol, pen.formulation);
    }
    {
        const Pencil pen = build_cpf_qsvd(g.a, g.c);
        const EigenSolution sol = solve_for(pen, g.partition);
        for (const auto& q : group_quadruples(sol.values)) {
            std::vector<double> m;
            for (size_t idx : q.members)
                m.push_back(std::norm(sol.values[idx].lambda()));
            w.cpf_magnitudes_squared.push_back(m);
            w.cpf.push_back(q.sigma);
        }
    }
    auto digits = [&](const std::vector<double>& est) {
        std::vector<int> d;
        for (size_t j = 0; j < est.size() && j < w.exact.size(); ++j)
            d.push_back(matched_digits(w.exact[j].to_double(), est[j]));
        return d;
    };
    w.digits_sq = digits(w.sq);
    w.digits_aug = digits(w.aug);
    w.digits_cpf = digits(w.cpf);
    return w;
}

std::string WorkedExample::report() const
{
    std::ostringstream o;
    auto row = [&](const char* label, const std::vector<double>& v) {
        o << label;
        for (double x : v)
            o << ' ' << fmt("%.12f", x);
        o << '\n';
    };
    auto drow = [&](const char* label, const std::vector<int>& d) {
        o << label;
        for (int x : d)
            o << ' ' << x;
        o << '\n';
    };
    o << "n = " << config.n << ", kappa_Y = " << fmt("%g", config.kappa_y) << ", kappa_Sigma = "
      << fmt("%g", config.kappa_sigma) << ", seed = " << config.seed << '\n';
    std::vector<double> ex;
    for (const auto& s : exact)
        ex.push_back(s.to_double());
    row("exact:              ", ex);
    row("squared pencil:     ", sq);
    row("augmented |lambda|: ", aug_magnitudes);
    for (size_t k = 0; k < 4; ++k) {
        std::vector<double> col;
        for (const auto& q : cpf_magnitudes_squared)
            col.push_back(q[k]);
        row(k == 0 ? "cpf |lambda|^2:     " : "                    ", col);
    }
    row("cpf geometric mean: ", cpf);
    drow("digits squared:     ", digits_sq);
    drow("digits augmented:   ", digits_aug);
    drow("digits cpf:         ", digits_cpf);
    return o.str();
}

} // namespace cpfsvd
