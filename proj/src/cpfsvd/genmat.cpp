#include "cpfsvd/genmat.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpfsvd/error.hpp"

namespace cpfsvd {

namespace {

using DD = DoubleDouble;

void check_config(const GeneratorConfig& cfg, bool triplet)
{
    require(cfg.n >= 2, ErrorCode::invalid_argument, "generator: n must be at least 2");
    require(cfg.kappa_y >= 1.0 && cfg.kappa_sigma >= 1.0 && (!triplet || cfg.kappa_x >= 1.0),
            ErrorCode::invalid_argument, "generator: condition numbers must be at least 1");
    require(std::isfinite(cfg.kappa_y) && std::isfinite(cfg.kappa_sigma) && std::isfinite(cfg.kappa_x),
            ErrorCode::invalid_argument, "generator: condition numbers must be finite");
}

// kappa^(1/2 - (j-1)/(n-1)) for j = 1..n; all ones when n == 1.
std::vector<DD> geometric_grid(size_t n, double kappa)
{
    std::vector<DD> g(n, DD(1.0));
    if (n < 2 || kappa == 1.0)
        return g;
    const DD k(kappa);
    const DD half(0.5);
    for (size_t j = 0; j < n; ++j) {
        const DD e = half - DD(static_cast<double>(j)) / DD(static_cast<double>(n - 1));
        g[j] = pow(k, e);
    }
    return g;
}

// alpha = s / sqrt(1 + s^2), gamma = 1 / sqrt(1 + s^2)
void split_sigma(const DD& s, DD& alpha, DD& gamma)
{
    const DD r = sqrt(DD(1.0) + s * s);
    alpha = s / r;
    gamma = DD(1.0) / r;
}

XMatrix orthogonal_x(size_t n, Rng& rng) { return to_extended(haar_orthogonal(n, rng)); }

CMatrix round_to_working(const XMatrix& m) { return to_working_complex(m); }

std::vector<double> to_doubles(const std::vector<DD>& v)
{
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i)
        out[i] = v[i].to_double();
    return out;
}

void write_extended(const std::string& path, const XMatrix& m)
{
    std::ofstream out(path);
    require(static_cast<bool>(out), ErrorCode::io, "cannot write " + path);
    out << m.rows() << ' ' << m.cols() << " extended\n";
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            out << to_string(m(i, j), 32) << '\n';
    require(static_cast<bool>(out), ErrorCode::io, "write failed for " + path);
}

XMatrix read_extended(const std::string& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::io, "cannot open " + path);
    size_t rows = 0, cols = 0;
    std::string field;
    in >> rows >> cols >> field;
    require(static_cast<bool>(in) && field == "extended", ErrorCode::io, path + ": bad extended matrix header");
    XMatrix m(rows, cols);
    std::string tok;
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) {
            require(static_cast<bool>(in >> tok), ErrorCode::io, path + ": truncated matrix data");
            m(i, j) = parse_double_double(tok);
        }
    return m;
}

double log_uniform(Rng& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
    return std::exp(d(rng));
}

} // namespace

std::string_view to_string(ProblemKind k)
{
    switch (k) {
    case ProblemKind::svd: return "svd";
    case ProblemKind::qsvd: return "qsvd";
    case ProblemKind::rsvd: return "rsvd";
    }
    return "?";
}

ProblemKind parse_problem_kind(std::string_view s)
{
    if (s == "svd")
        return ProblemKind::svd;
    if (s == "qsvd")
        return ProblemKind::qsvd;
    if (s == "rsvd")
        return ProblemKind::rsvd;
    fail(ErrorCode::invalid_argument, "unknown problem kind '" + std::string(s) + "'");
}

ReductionFactors GeneratedProblem::factors() const
{
    ReductionFactors f;
    f.u = u;
    f.v = v;
    f.x = x;
    f.y = y;
    f.alpha = to_doubles(alpha);
    f.beta = to_doubles(beta);
    f.gamma = to_doubles(gamma);
    return f;
}

std::vector<double> GeneratedProblem::sigma_working() const { return to_doubles(sigma); }

std::vector<DoubleDouble> true_sigma_grid(size_t n, double kappa_sigma)
{
    require(n >= 2, ErrorCode::invalid_argument, "true_sigma_grid: n must be at least 2");
    require(kappa_sigma >= 1.0 && std::isfinite(kappa_sigma), ErrorCode::invalid_argument,
            "true_sigma_grid: kappa must be finite and at least 1");
    return geometric_grid(n, kappa_sigma);
}

XMatrix conditioned_matrix(size_t n, double kappa, Rng& rng)
{
    require(kappa >= 1.0 && std::isfinite(kappa), ErrorCode::invalid_argument,
            "conditioned_matrix: kappa must be finite and at least 1");
    const XMatrix uy = orthogonal_x(n, rng);
    const XMatrix vy = orthogonal_x(n, rng);
    const std::vector<DD> eta = geometric_grid(n, kappa);
    return uy * XMatrix::diagonal(eta) * transpose(vy);
}

GeneratedProblem generate_qsvd(const GeneratorConfig& cfg)
{
    check_config(cfg, false);
    const size_t n = cfg.n;
    Rng rng(cfg.seed);
    GeneratedProblem g;
    g.kind = ProblemKind::qsvd;
    g.y = conditioned_matrix(n, cfg.kappa_y, rng);
    g.u = orthogonal_x(n, rng);
    g.v = orthogonal_x(n, rng);
    g.sigma = true_sigma_grid(n, cfg.kappa_sigma);
    g.alpha.resize(n);
    g.gamma.resize(n);
    g.beta.assign(n, DD(1.0));
    for (size_t j = 0; j < n; ++j)
        split_sigma(g.sigma[j], g.alpha[j], g.gamma[j]);

    // A^T = Y^-T S_alpha U^T, so A = U S_alpha Y^-1 without forming an inverse
    const XMatrix yt = transpose(g.y);
    const XMatrix at = solve_linear(yt, XMatrix::diagonal(g.alpha) * transpose(g.u));
    const XMatrix ct = solve_linear(yt, XMatrix::diagonal(g.gamma) * transpose(g.v));
    g.a = round_to_working(transpose(at));
    g.c = round_to_working(transpose(ct));
    g.partition = partition_from_counts({n, 0, 0, 0, 0, 0}, 0, 0, 0, 0);
    return g;
}

GeneratedProblem generate_rsvd(const GeneratorConfig& cfg)
{
    check_config(cfg, true);
    const size_t n = cfg.n;
    Rng rng(cfg.seed);
    GeneratedProblem g;
    g.kind = ProblemKind::rsvd;
    g.x = conditioned_matrix(n, cfg.kappa_x, rng);
    g.y = conditioned_matrix(n, cfg.kappa_y, rng);
    g.u = orthogonal_x(n, rng);
    g.v = orthogonal_x(n, rng);
    g.sigma = true_sigma_grid(n, cfg.kappa_sigma);
    g.alpha.resize(n);
    g.gamma.resize(n);
    g.beta.assign(n, DD(1.0));
    for (size_t j = 0; j < n; ++j)
        split_sigma(g.sigma[j], g.alpha[j], g.gamma[j]);

    const XMatrix xt = transpose(g.x);
    const XMatrix yt = transpose(g.y);
    // W = X^-T S_alpha, A^T = Y^-T W^T
    const XMatrix w = solve_linear(xt, XMatrix::diagonal(g.alpha));
    const XMatrix at = solve_linear(yt, transpose(w));
    const XMatrix b = solve_linear(xt, transpose(g.u));
    const XMatrix ct = solve_linear(yt, XMatrix::diagonal(g.gamma) * transpose(g.v));
    g.a = round_to_working(transpose(at));
    g.b = round_to_working(b);
    g.c = round_to_working(transpose(ct));
    g.partition = partition_from_counts({n, 0, 0, 0, 0, 0}, 0, 0, 0, 0);
    return g;
}

GeneratedProblem generate_structured(ProblemKind kind, const RsvdPartition& part, double kappa, std::uint64_t seed)
{
    const auto& p = part.p;
    const auto& q = part.q;
    const auto& m = part.m;
    const auto& nn = part.n;
    const size_t np = part.p_total(), nq = part.q_total(), nm = part.m_total(), nc = part.n_total();
    const size_t p1 = p[0];
    require(np > 0 && nq > 0, ErrorCode::invalid_argument, "generate_structured: A must not be empty");

    Rng rng(seed);
    GeneratedProblem g;
    g.kind = kind;
    g.partition = part;

    g.sigma.resize(p1);
    for (auto& s : g.sigma)
        s = DD(log_uniform(rng, 0.1, 10.0));
    std::sort(g.sigma.begin(), g.sigma.end(), std::greater<>());
    g.alpha.resize(p1);
    g.beta.assign(p1, DD(1.0));
    g.gamma.resize(p1);
    for (size_t j = 0; j < p1; ++j) {
        split_sigma(g.sigma[j], g.alpha[j], g.gamma[j]);
        if (kind == ProblemKind::svd)
            g.alpha[j] = g.sigma[j], g.gamma[j] = DD(1.0);
        else if (kind == ProblemKind::rsvd) {
            // alpha^2 + beta^2 gamma^2 = 1 with beta free
            g.beta[j] = DD(log_uniform(rng, 0.5, 2.0));
            g.gamma[j] = g.gamma[j] / g.beta[j];
        }
    }

    auto put = [](XMatrix& s, size_t r0, size_t c0, size_t k, const std::vector<DD>* d) {
        for (size_t i = 0; i < k; ++i)
            s(r0 + i, c0 + i) = d ? (*d)[i] : DD(1.0);
    };
    auto off = [](const auto& arr, size_t k) {
        size_t o = 0;
        for (size_t i = 0; i < k; ++i)
            o += arr[i];
        return o;
    };

    switch (kind) {
    case ProblemKind::svd: {
        const OsvdPartition o = to_osvd(part);
        const size_t rows = o.p[0] + o.p[1], cols = o.q[0] + o.q[1];
        g.u = orthogonal_x(rows, rng);
        g.v = orthogonal_x(cols, rng);
        XMatrix s(rows, cols);
        put(s, 0, 0, p1, &g.alpha);
        g.a = round_to_working(g.u * s * transpose(g.v));
        break;
    }
    case ProblemKind::qsvd: {
        const QsvdPartition s = to_qsvd(part);
        const size_t rows = s.p[0] + s.p[1] + s.p[2];
        const size_t cols = s.q[0] + s.q[1] + s.q[2] + s.q[3];
        const size_t crow = s.n[0] + s.n[1] + s.n[2];
        g.u = orthogonal_x(rows, rng);
        g.v = orthogonal_x(crow, rng);
        g.y = conditioned_matrix(cols, kappa, rng);
        XMatrix sa(rows, cols), sc(crow, cols);
        put(sa, 0, off(s.q, 2), s.p[0], &g.alpha);
        put(sa, s.p[0], off(s.q, 3), s.p[1], nullptr);
        put(sc, 0, s.q[0], s.n[0], nullptr);
        put(sc, s.n[0], off(s.q, 2), s.n[1], &g.gamma);
        const XMatrix yt = transpose(g.y);
        g.a = round_to_working(transpose(solve_linear(yt, transpose(g.u * sa))));
        g.c = round_to_working(transpose(solve_linear(yt, transpose(g.v * sc))));
        break;
    }
    case ProblemKind::rsvd: {
        g.x = conditioned_matrix(np, kappa, rng);
        g.y = conditioned_matrix(nq, kappa, rng);
        g.u = orthogonal_x(nm, rng);
        g.v = orthogonal_x(nc, rng);
        XMatrix sa(np, nq), sb(np, nm), sc(nc, nq);
        put(sa, 0, off(q, 2), p[0], &g.alpha);
        put(sa, off(p, 1), off(q, 3), p[1], nullptr);
        put(sa, off(p, 2), off(q, 4), p[2], nullptr);
        put(sa, off(p, 3), off(q, 5), p[3], nullptr);
        put(sb, 0, 0, p[0], &g.beta);
        put(sb, off(p, 1), off(m, 1), m[1], nullptr);
        put(sb, off(p, 4), off(m, 3), m[3], nullptr);
        put(sc, 0, off(q, 1), nn[0], nullptr);
        put(sc, off(nn, 1), off(q, 2), nn[1], &g.gamma);
        put(sc, off(nn, 2), off(q, 4), nn[2], nullptr);
        const XMatrix xt = transpose(g.x);
        const XMatrix yt = transpose(g.y);
        // A = X^-T S_alpha Y^-1, B = X^-T S_beta U^T, C = V S_gamma Y^-1
        const XMatrix w = solve_linear(xt, sa);
        g.a = round_to_working(transpose(solve_linear(yt, transpose(w))));
        g.b = round_to_working(solve_linear(xt, sb * transpose(g.u)));
        g.c = round_to_working(transpose(solve_linear(yt, transpose(g.v * sc))));
        break;
    }
    }
    return g;
}

RsvdPartition random_partition(ProblemKind kind, size_t max_count, Rng& rng)
{
    std::uniform_int_distribution<size_t> d(0, max_count);
    std::uniform_int_distribution<size_t> d1(1, std::max<size_t>(1, max_count));
    switch (kind) {
    case ProblemKind::svd: {
        OsvdPartition o;
        o.p[0] = o.q[0] = d1(rng);
        o.p[1] = d(rng);
        o.q[1] = d(rng);
        return embed(o);
    }
    case ProblemKind::qsvd: {
        QsvdPartition s;
        s.p[0] = d1(rng);
        s.p[1] = d(rng);
        s.p[2] = d(rng);
        s.q[0] = d(rng);
        s.q[1] = d(rng);
        s.q[2] = s.p[0];
        s.q[3] = s.p[1];
        s.n = {s.q[1], s.p[0], d(rng)};
        return embed(s);
    }
    case ProblemKind::rsvd: {
        std::array<size_t, 6> p{};
        p[0] = d1(rng);
        for (size_t i = 1; i < 6; ++i)
            p[i] = d(rng);
        const size_t q1 = d(rng), q2 = d(rng), m3 = d(rng), n4 = d(rng);
        return partition_from_counts(p, q1, q2, m3, n4);
    }
    }
    fail(ErrorCode::invalid_argument, "random_partition: unknown kind");
}

void write_problem(const GeneratedProblem& g, const std::string& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec, ErrorCode::io, "cannot create directory " + dir + ": " + ec.message());
    const fs::path base(dir);
    write_matrix_file((base / "A.txt").string(), g.a);
    if (!g.b.empty())
        write_matrix_file((base / "B.txt").string(), g.b);
    if (!g.c.empty())
        write_matrix_file((base / "C.txt").string(), g.c);

    std::ofstream t(base / "truth.txt");
    require(static_cast<bool>(t), ErrorCode::io, "cannot write truth.txt in " + dir);
    t << "# kind " << to_string(g.kind) << '\n';
    t << "# sigma alpha beta gamma\n";
    for (size_t j = 0; j < g.sigma.size(); ++j)
        t << to_string(g.sigma[j], 30) << ' ' << to_string(g.alpha[j], 30) << ' ' << to_string(g.beta[j], 30)
          << ' ' << to_string(g.gamma[j], 30) << '\n';
    require(static_cast<bool>(t), ErrorCode::io, "write failed for truth.txt in " + dir);

    const std::pair<const char*, const XMatrix*> factors[] = {{"U", &g.u}, {"V", &g.v}, {"X", &g.x}, {"Y", &g.y}};
    for (const auto& [name, mat] : factors)
        if (!mat->empty())
            write_extended((base / (std::string(name) + ".txt")).string(), *mat);
}

ReductionFactors read_factors(const std::string& dir)
{
    namespace fs = std::filesystem;
    const fs::path base(dir);
    ReductionFactors f;
    const std::pair<const char*, XMatrix*> factors[] = {{"U", &f.u}, {"V", &f.v}, {"X", &f.x}, {"Y", &f.y}};
    for (const auto& [name, mat] : factors) {
        const fs::path path = base / (std::string(name) + ".txt");
        if (fs::exists(path))
            *mat = read_extended(path.string());
    }
    std::ifstream t(base / "truth.txt");
    require(static_cast<bool>(t), ErrorCode::io, "cannot open truth.txt in " + dir);
    std::string line;
    while (std::getline(t, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string s, a, b, c;
        require(static_cast<bool>(ls >> s >> a >> b >> c), ErrorCode::io, "truth.txt: malformed line '" + line + "'");
        f.alpha.push_back(parse_double_double(a).to_double());
        f.beta.push_back(parse_double_double(b).to_double());
        f.gamma.push_back(parse_double_double(c).to_double());
    }
    return f;
}

} // namespace cpfsvd
