// Command line front end; talks to the library only through the C interface.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpfsvd/cpfsvd.h"

namespace {

struct Failure {
    cpfsvd_status status;
};

void check(cpfsvd_status s)
{
    if (s != CPFSVD_OK)
        throw Failure{s};
}

template <typename T, void (*Destroy)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Destroy(p); }
    T** out() { return &p; }
    T* get() const { return p; }
};

using Matrix = Handle<cpfsvd_matrix, cpfsvd_matrix_destroy>;
using Pencil = Handle<cpfsvd_pencil, cpfsvd_pencil_destroy>;
using Solution = Handle<cpfsvd_solution, cpfsvd_solution_destroy>;
using Problem = Handle<cpfsvd_problem, cpfsvd_problem_destroy>;

const char* class_name(cpfsvd_eigen_class c)
{
    switch (c) {
    case CPFSVD_FINITE_NONZERO: return "finite";
    case CPFSVD_ZERO: return "zero";
    case CPFSVD_INFINITE: return "infinite";
    case CPFSVD_INDETERMINATE: return "indeterminate";
    }
    return "?";
}

cpfsvd_problem_kind parse_kind(const std::string& s)
{
    if (s == "qsvd")
        return CPFSVD_KIND_QSVD;
    if (s == "rsvd")
        return CPFSVD_KIND_RSVD;
    throw CLI::ValidationError("--kind", "expected qsvd or rsvd");
}

cpfsvd_sweep_axis parse_axis(const std::string& s)
{
    if (s == "kappa_y")
        return CPFSVD_AXIS_KAPPA_Y;
    if (s == "kappa_sigma")
        return CPFSVD_AXIS_KAPPA_SIGMA;
    if (s == "kappa_xy")
        return CPFSVD_AXIS_KAPPA_XY;
    throw CLI::ValidationError("--axis", "expected kappa_y, kappa_sigma or kappa_xy");
}

void print_partition(const cpfsvd_partition& p)
{
    std::printf("p:");
    for (size_t v : p.p)
        std::printf(" %zu", v);
    std::printf("\nq:");
    for (size_t v : p.q)
        std::printf(" %zu", v);
    std::printf("\nm:");
    for (size_t v : p.m)
        std::printf(" %zu", v);
    std::printf("\nn:");
    for (size_t v : p.n)
        std::printf(" %zu", v);
    std::printf("\n");
}

struct Operands {
    std::string a, b, c;
    Matrix ma, mb, mc;

    void load()
    {
        check(cpfsvd_matrix_read(a.c_str(), ma.out()));
        if (!b.empty())
            check(cpfsvd_matrix_read(b.c_str(), mb.out()));
        if (!c.empty())
            check(cpfsvd_matrix_read(c.c_str(), mc.out()));
    }
};

void add_operands(CLI::App* cmd, Operands& ops)
{
    cmd->add_option("-A,--a", ops.a, "matrix A")->required()->check(CLI::ExistingFile);
    cmd->add_option("-B,--b", ops.b, "matrix B (triplets)")->check(CLI::ExistingFile);
    cmd->add_option("-C,--c", ops.c, "matrix C (pairs and triplets)")->check(CLI::ExistingFile);
}

cpfsvd_formulation formulation_of(const std::string& name)
{
    cpfsvd_formulation f;
    check(cpfsvd_formulation_from_name(name.c_str(), &f));
    return f;
}

void print_counts(const char* label, const cpfsvd_counts& c)
{
    std::printf("%s finite=%zu zero=%zu infinite=%zu indeterminate=%zu\n", label, c.finite_nonzero, c.zero,
                c.infinite, c.indeterminate);
}

bool is_cpf(cpfsvd_formulation f) { return f == CPFSVD_CPF_SVD || f == CPFSVD_CPF_QSVD || f == CPFSVD_CPF_RSVD; }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quotient and restricted singular values via cross-product-free pencils"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a random test problem with known singular values");
    std::string gen_kind = "qsvd", gen_out;
    size_t gen_n = 4;
    double gen_kx = 10, gen_ky = 10, gen_ks = 10;
    uint64_t gen_seed = 1;
    gen->add_option("--kind", gen_kind, "qsvd or rsvd")->capture_default_str();
    gen->add_option("-n", gen_n, "dimension")->capture_default_str();
    gen->add_option("--kappa-x", gen_kx, "condition number of X (rsvd)")->capture_default_str();
    gen->add_option("--kappa-y", gen_ky, "condition number of Y")->capture_default_str();
    gen->add_option("--kappa-sigma", gen_ks, "ratio of largest to smallest singular value")->capture_default_str();
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("-o,--out", gen_out, "output directory")->required();

    // solve
    auto* solve = app.add_subcommand("solve", "solve one pencil formulation and print its spectrum");
    Operands solve_ops;
    std::string solve_form = "cpf-qsvd", solve_method = "auto";
    add_operands(solve, solve_ops);
    solve->add_option("-f,--formulation", solve_form)->capture_default_str();
    solve->add_option("--method", solve_method, "auto, general or hpd")->capture_default_str();

    // kcf
    auto* kcf = app.add_subcommand("kcf", "rank partition, predicted Kronecker structure and observed counts");
    Operands kcf_ops;
    std::string kcf_form = "cpf-qsvd";
    double kcf_tol = 0.0;
    add_operands(kcf, kcf_ops);
    kcf->add_option("-f,--formulation", kcf_form)->capture_default_str();
    kcf->add_option("--rank-tol", kcf_tol, "relative rank tolerance (0 = default)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "median-max chordal errors over a condition-number grid, as CSV");
    std::string sw_kind = "qsvd", sw_axis = "kappa_y", sw_out = "-";
    std::vector<std::string> sw_forms;
    int sw_lo = 1, sw_hi = 7, sw_step = 1;
    size_t sw_samples = 100, sw_n = 10;
    double sw_kx = 10, sw_ky = 10, sw_ks = 10;
    uint64_t sw_seed = 1;
    unsigned sw_threads = 0;
    sweep->add_option("--kind", sw_kind, "qsvd or rsvd")->capture_default_str();
    sweep->add_option("--axis", sw_axis, "kappa_y, kappa_sigma or kappa_xy")->capture_default_str();
    sweep->add_option("--from", sw_lo, "first decade exponent")->capture_default_str();
    sweep->add_option("--to", sw_hi, "last decade exponent")->capture_default_str();
    sweep->add_option("--step", sw_step, "exponent step")->capture_default_str();
    sweep->add_option("--formulations", sw_forms, "default: every formulation for the kind");
    sweep->add_option("--samples", sw_samples)->capture_default_str();
    sweep->add_option("-n", sw_n)->capture_default_str();
    sweep->add_option("--kappa-x", sw_kx, "fixed value when not swept")->capture_default_str();
    sweep->add_option("--kappa-y", sw_ky, "fixed value when not swept")->capture_default_str();
    sweep->add_option("--kappa-sigma", sw_ks, "fixed value when not swept")->capture_default_str();
    sweep->add_option("--seed", sw_seed)->capture_default_str();
    sweep->add_option("--threads", sw_threads, "0 = all cores")->capture_default_str();
    sweep->add_option("-o,--out", sw_out, "CSV path, - for stdout")->capture_default_str();

    // example
    auto* example = app.add_subcommand("example", "replay the small n = 4 accuracy example");
    uint64_t ex_seed = 2021;
    example->add_option("--seed", ex_seed)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            Problem g;
            check(cpfsvd_problem_generate(parse_kind(gen_kind), gen_n, gen_kx, gen_ky, gen_ks, gen_seed, g.out()));
            check(cpfsvd_problem_write(g.get(), gen_out.c_str()));
            std::vector<double> s(gen_n);
            size_t count = 0;
            check(cpfsvd_problem_sigmas(g.get(), s.data(), s.size(), &count));
            std::printf("wrote %s problem to %s\nsigma:", gen_kind.c_str(), gen_out.c_str());
            for (double v : s)
                std::printf(" %.15e", v);
            std::printf("\n");
        } else if (*solve) {
            solve_ops.load();
            const cpfsvd_formulation f = formulation_of(solve_form);
            cpfsvd_method method = CPFSVD_METHOD_AUTO;
            if (solve_method == "general")
                method = CPFSVD_METHOD_GENERAL;
            else if (solve_method == "hpd")
                method = CPFSVD_METHOD_HPD;
            else if (solve_method != "auto")
                throw CLI::ValidationError("--method", "expected auto, general or hpd");
            Pencil pen;
            check(cpfsvd_pencil_build(f, solve_ops.ma.get(), solve_ops.mb.get(), solve_ops.mc.get(), pen.out()));
            // the partition sets the Jordan-aware classification thresholds
            cpfsvd_partition part;
            check(cpfsvd_partition_compute(solve_ops.ma.get(), solve_ops.mb.get(), solve_ops.mc.get(), 0.0, &part));
            Solution sol;
            check(cpfsvd_solve(pen.get(), method, 0, &part, sol.out()));
            size_t k = 0;
            check(cpfsvd_solution_size(sol.get(), &k));
            std::printf("# alpha_re alpha_im beta_re beta_im class\n");
            for (size_t i = 0; i < k; ++i) {
                cpfsvd_eigenvalue e;
                check(cpfsvd_solution_eigenvalue(sol.get(), i, &e));
                std::printf("%.17e %.17e %.17e %.17e %s\n", e.alpha_re, e.alpha_im, e.beta_re, e.beta_im,
                            class_name(e.cls));
            }
            size_t ns = 0;
            cpfsvd_status st = cpfsvd_estimate_sigmas(sol.get(), f, nullptr, 0, &ns);
            if (st != CPFSVD_OK && st != CPFSVD_E_BUFFER_TOO_SMALL)
                check(st);
            std::vector<double> s(ns);
            check(cpfsvd_estimate_sigmas(sol.get(), f, s.data(), s.size(), &ns));
            std::printf("sigma:");
            for (double v : s)
                std::printf(" %.17e", v);
            std::printf("\n");
            if (is_cpf(f)) {
                cpfsvd_triplet_counts tc;
                check(cpfsvd_triplet_classes(sol.get(), pen.get(), &part, &tc));
                std::printf("classes: regular=%zu (1,1,0)=%zu (1,0,1)=%zu (1,0,0)=%zu (0,1,1)=%zu trivial=%zu\n",
                            tc.cls[0], tc.cls[1], tc.cls[2], tc.cls[3], tc.cls[4], tc.cls[5]);
            }
        } else if (*kcf) {
            kcf_ops.load();
            const cpfsvd_formulation f = formulation_of(kcf_form);
            cpfsvd_partition part;
            check(cpfsvd_partition_compute(kcf_ops.ma.get(), kcf_ops.mb.get(), kcf_ops.mc.get(), kcf_tol, &part));
            print_partition(part);
            size_t need = 0;
            cpfsvd_predict_describe(f, &part, nullptr, 0, &need);
            std::string text(need, '\0');
            check(cpfsvd_predict_describe(f, &part, text.data(), text.size(), &need));
            std::printf("predicted blocks:\n%s", text.c_str());
            cpfsvd_counts predicted;
            check(cpfsvd_predict_counts(f, &part, &predicted));
            Pencil pen;
            check(cpfsvd_pencil_build(f, kcf_ops.ma.get(), kcf_ops.mb.get(), kcf_ops.mc.get(), pen.out()));
            Solution sol;
            check(cpfsvd_solve(pen.get(), CPFSVD_METHOD_GENERAL, 0, &part, sol.out()));
            cpfsvd_counts observed;
            check(cpfsvd_solution_counts(sol.get(), &observed));
            print_counts("predicted:", predicted);
            print_counts("observed: ", observed);
            const bool ok = predicted.finite_nonzero == observed.finite_nonzero && predicted.zero == observed.zero &&
                            predicted.infinite == observed.infinite &&
                            predicted.indeterminate == observed.indeterminate;
            std::printf("%s\n", ok ? "counts match" : "counts differ");
            return ok ? 0 : 3;
        } else if (*sweep) {
            const cpfsvd_problem_kind kind = parse_kind(sw_kind);
            std::vector<cpfsvd_formulation> forms;
            if (sw_forms.empty())
                sw_forms = kind == CPFSVD_KIND_QSVD ? std::vector<std::string>{"sq-qsvd", "aug-qsvd", "cpf-qsvd"}
                                                    : std::vector<std::string>{"aug-rsvd", "cpf-rsvd"};
            for (const auto& s : sw_forms)
                forms.push_back(formulation_of(s));
            if (sw_step <= 0 || sw_lo > sw_hi)
                throw CLI::ValidationError("--from/--to/--step", "need from <= to and a positive step");
            std::vector<double> grid;
            for (int e = sw_lo; e <= sw_hi; e += sw_step)
                grid.push_back(std::pow(10.0, e));
            cpfsvd_sweep_config cfg{};
            cfg.kind = kind;
            cfg.axis = parse_axis(sw_axis);
            cfg.grid = grid.data();
            cfg.grid_size = grid.size();
            cfg.formulations = forms.data();
            cfg.formulation_count = forms.size();
            cfg.samples = sw_samples;
            cfg.n = sw_n;
            cfg.kappa_x = sw_kx;
            cfg.kappa_y = sw_ky;
            cfg.kappa_sigma = sw_ks;
            cfg.seed = sw_seed;
            cfg.threads = sw_threads;
            check(cpfsvd_sweep_csv(&cfg, sw_out.c_str()));
        } else if (*example) {
            size_t need = 0;
            cpfsvd_worked_example(ex_seed, nullptr, 0, &need);
            std::string text(need, '\0');
            check(cpfsvd_worked_example(ex_seed, text.data(), text.size(), &need));
            std::fputs(text.c_str(), stdout);
        }
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s: %s\n", cpfsvd_status_string(f.status), cpfsvd_last_error());
        return 1;
    } catch (const CLI::Error& e) {
        return app.exit(e);
    }
    return 0;
}
