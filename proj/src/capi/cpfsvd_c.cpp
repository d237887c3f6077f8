#include "cpfsvd/cpfsvd.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <string>

#include "cpfsvd/bench.hpp"
#include "cpfsvd/error.hpp"

struct cpfsvd_matrix {
    cpfsvd::CMatrix m;
};
struct cpfsvd_pencil {
    cpfsvd::Pencil p;
};
struct cpfsvd_solution {
    cpfsvd::EigenSolution s;
};
struct cpfsvd_problem {
    cpfsvd::GeneratedProblem g;
};

namespace {

using namespace cpfsvd;

thread_local std::string g_last_error;

static_assert(static_cast<int>(Formulation::cpf_rsvd) == CPFSVD_CPF_RSVD);
static_assert(static_cast<int>(EigenClass::indeterminate) == CPFSVD_INDETERMINATE);
static_assert(static_cast<int>(ProblemKind::rsvd) == CPFSVD_KIND_RSVD);
static_assert(static_cast<int>(SweepAxis::kappa_xy) == CPFSVD_AXIS_KAPPA_XY);

cpfsvd_status map(ErrorCode c)
{
    switch (c) {
    case ErrorCode::invalid_argument: return CPFSVD_E_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return CPFSVD_E_DIMENSION;
    case ErrorCode::singular_matrix: return CPFSVD_E_SINGULAR;
    case ErrorCode::not_definite: return CPFSVD_E_NOT_DEFINITE;
    case ErrorCode::solver_failure: return CPFSVD_E_SOLVER;
    case ErrorCode::inconsistent_structure: return CPFSVD_E_STRUCTURE;
    case ErrorCode::io: return CPFSVD_E_IO;
    }
    return CPFSVD_E_INTERNAL;
}

cpfsvd_status set_error(cpfsvd_status s, std::string msg)
{
    g_last_error = std::move(msg);
    return s;
}

// Runs f, translating exceptions into status codes.
template <typename F>
cpfsvd_status guard(F&& f)
{
    try {
        g_last_error.clear();
        f();
        return CPFSVD_OK;
    } catch (const Error& e) {
        return set_error(map(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(CPFSVD_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(CPFSVD_E_INTERNAL, e.what());
    } catch (...) {
        return set_error(CPFSVD_E_INTERNAL, "unknown error");
    }
}

void need(const void* p, const char* name)
{
    if (!p)
        fail(ErrorCode::invalid_argument, std::string(name) + " must not be NULL");
}

Formulation to_formulation(cpfsvd_formulation f)
{
    if (static_cast<int>(f) < 0 || static_cast<int>(f) > CPFSVD_CPF_RSVD)
        fail(ErrorCode::invalid_argument, "unknown formulation code " + std::to_string(static_cast<int>(f)));
    return static_cast<Formulation>(f);
}

RsvdPartition from_c(const cpfsvd_partition& c)
{
    RsvdPartition r;
    std::copy(std::begin(c.p), std::end(c.p), r.p.begin());
    std::copy(std::begin(c.q), std::end(c.q), r.q.begin());
    std::copy(std::begin(c.m), std::end(c.m), r.m.begin());
    std::copy(std::begin(c.n), std::end(c.n), r.n.begin());
    // the ranks follow from the free counts; recompute so they stay consistent
    RsvdPartition full = partition_from_counts(r.p, r.q[0], r.q[1], r.m[2], r.n[3]);
    if (full.q != r.q || full.m != r.m || full.n != r.n)
        fail(ErrorCode::inconsistent_structure, "partition counts violate the block identities");
    return full;
}

cpfsvd_partition to_c(const RsvdPartition& r)
{
    cpfsvd_partition c{};
    std::copy(r.p.begin(), r.p.end(), c.p);
    std::copy(r.q.begin(), r.q.end(), c.q);
    std::copy(r.m.begin(), r.m.end(), c.m);
    std::copy(r.n.begin(), r.n.end(), c.n);
    return c;
}

void copy_text(const std::string& text, char* buf, size_t capacity, size_t* needed)
{
    if (needed)
        *needed = text.size() + 1;
    if (!buf || capacity < text.size() + 1) {
        if (buf && capacity > 0)
            buf[0] = '\0';
        throw Error(ErrorCode::invalid_argument, "buffer too small");
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
}

// copy_text reports a short buffer through invalid_argument; give it its own code
cpfsvd_status text_result(cpfsvd_status s)
{
    if (s == CPFSVD_E_INVALID_ARGUMENT && g_last_error == "buffer too small")
        return CPFSVD_E_BUFFER_TOO_SMALL;
    return s;
}

cpfsvd_status copy_values(const std::vector<double>& v, double* out, size_t capacity, size_t* count)
{
    if (count)
        *count = v.size();
    if (capacity < v.size() || (!out && !v.empty()))
        return set_error(CPFSVD_E_BUFFER_TOO_SMALL,
                         "buffer holds " + std::to_string(capacity) + " values, " + std::to_string(v.size()) + " needed");
    std::copy(v.begin(), v.end(), out);
    return CPFSVD_OK;
}

} // namespace

extern "C" {

const char* cpfsvd_last_error(void) { return g_last_error.c_str(); }

const char* cpfsvd_status_string(cpfsvd_status s)
{
    switch (s) {
    case CPFSVD_OK: return "ok";
    case CPFSVD_E_INVALID_ARGUMENT: return "invalid argument";
    case CPFSVD_E_DIMENSION: return "dimension mismatch";
    case CPFSVD_E_SINGULAR: return "singular matrix";
    case CPFSVD_E_NOT_DEFINITE: return "not definite";
    case CPFSVD_E_SOLVER: return "solver failure";
    case CPFSVD_E_STRUCTURE: return "inconsistent structure";
    case CPFSVD_E_IO: return "i/o error";
    case CPFSVD_E_BUFFER_TOO_SMALL: return "buffer too small";
    case CPFSVD_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* cpfsvd_version(void) { return "1.0.0"; }

cpfsvd_status cpfsvd_formulation_from_name(const char* name, cpfsvd_formulation* out)
{
    return guard([&] {
        need(name, "name");
        need(out, "out");
        const Formulation f = parse_formulation(name);
        if (f == Formulation::qqqq)
            fail(ErrorCode::invalid_argument, "qqqq is not exposed through the C interface");
        *out = static_cast<cpfsvd_formulation>(f);
    });
}

const char* cpfsvd_formulation_name(cpfsvd_formulation f)
{
    if (static_cast<int>(f) < 0 || static_cast<int>(f) > CPFSVD_CPF_RSVD)
        return "unknown";
    return to_string(static_cast<Formulation>(f)).data();
}

cpfsvd_status cpfsvd_matrix_create(size_t rows, size_t cols, const double* re, const double* im, cpfsvd_matrix** out)
{
    return guard([&] {
        need(out, "out");
        *out = nullptr;
        if (rows * cols > 0)
            need(re, "re");
        auto h = std::make_unique<cpfsvd_matrix>();
        h->m = CMatrix(rows, cols);
        for (size_t k = 0; k < rows * cols; ++k)
            h->m.data()[k] = cplx(re[k], im ? im[k] : 0.0);
        *out = h.release();
    });
}

cpfsvd_status cpfsvd_matrix_read(const char* path, cpfsvd_matrix** out)
{
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = nullptr;
        auto h = std::make_unique<cpfsvd_matrix>();
        h->m = read_matrix_file(path);
        *out = h.release();
    });
}

cpfsvd_status cpfsvd_matrix_write(const cpfsvd_matrix* m, const char* path)
{
    return guard([&] {
        need(m, "m");
        need(path, "path");
        write_matrix_file(path, m->m);
    });
}

cpfsvd_status cpfsvd_matrix_shape(const cpfsvd_matrix* m, size_t* rows, size_t* cols)
{
    return guard([&] {
        need(m, "m");
        if (rows)
            *rows = m->m.rows();
        if (cols)
            *cols = m->m.cols();
    });
}

cpfsvd_status cpfsvd_matrix_copy_out(const cpfsvd_matrix* m, double* re, double* im)
{
    return guard([&] {
        need(m, "m");
        for (size_t k = 0; k < m->m.size(); ++k) {
            if (re)
                re[k] = m->m.data()[k].real();
            if (im)
                im[k] = m->m.data()[k].imag();
        }
    });
}

void cpfsvd_matrix_destroy(cpfsvd_matrix* m) { delete m; }

cpfsvd_status cpfsvd_pencil_build(cpfsvd_formulation f, const cpfsvd_matrix* a, const cpfsvd_matrix* b,
                                  const cpfsvd_matrix* c, cpfsvd_pencil** out)
{
    return guard([&] {
        need(out, "out");
        *out = nullptr;
        need(a, "a");
        const Formulation form = to_formulation(f);
        auto h = std::make_unique<cpfsvd_pencil>();
        switch (form) {
        case Formulation::sq_svd: h->p = build_sq_svd(a->m); break;
        case Formulation::aug_svd: h->p = build_aug_svd(a->m); break;
        case Formulation::cpf_svd: h->p = build_cpf_svd(a->m); break;
        case Formulation::sq_qsvd: need(c, "c"); h->p = build_sq_qsvd(a->m, c->m); break;
        case Formulation::aug_qsvd: need(c, "c"); h->p = build_aug_qsvd(a->m, c->m); break;
        case Formulation::cpf_qsvd: need(c, "c"); h->p = build_cpf_qsvd(a->m, c->m); break;
        case Formulation::aug_rsvd:
            need(b, "b");
            need(c, "c");
            h->p = build_aug_rsvd(a->m, b->m, c->m);
            break;
        case Formulation::cpf_rsvd:
            need(b, "b");
            need(c, "c");
            h->p = build_cpf_rsvd(a->m, b->m, c->m);
            break;
        default: fail(ErrorCode::invalid_argument, "unsupported formulation");
        }
        *out = h.release();
    });
}

cpfsvd_status cpfsvd_pencil_dim(const cpfsvd_pencil* p, size_t* dim)
{
    return guard([&] {
        need(p, "p");
        need(dim, "dim");
        *dim = p->p.dim();
    });
}

cpfsvd_status cpfsvd_pencil_matrices(const cpfsvd_pencil* p, cpfsvd_matrix** lhs, cpfsvd_matrix** rhs)
{
    return guard([&] {
        need(p, "p");
        need(lhs, "lhs");
        need(rhs, "rhs");
        *lhs = nullptr;
        *rhs = nullptr;
        auto l = std::make_unique<cpfsvd_matrix>();
        auto r = std::make_unique<cpfsvd_matrix>();
        l->m = p->p.lhs;
        r->m = p->p.rhs;
        *lhs = l.release();
        *rhs = r.release();
    });
}

void cpfsvd_pencil_destroy(cpfsvd_pencil* p) { delete p; }

cpfsvd_status cpfsvd_solve(const cpfsvd_pencil* p, cpfsvd_method method, int want_vectors,
                           const cpfsvd_partition* partition, cpfsvd_solution** out)
{
    return guard([&] {
        need(p, "p");
        need(out, "out");
        *out = nullptr;
        ClassifyOptions opts;
        if (partition)
            opts = classify_options_for(predict_kcf(p->p.formulation, from_c(*partition)));
        auto h = std::make_unique<cpfsvd_solution>();
        const bool vec = want_vectors != 0;
        switch (method) {
        case CPFSVD_METHOD_GENERAL: h->s = solve_general(p->p, vec, opts); break;
        case CPFSVD_METHOD_HPD: h->s = solve_hpd(p->p, vec, opts); break;
        case CPFSVD_METHOD_AUTO: {
            const Formulation f = p->p.formulation;
            if (f == Formulation::aug_svd || f == Formulation::aug_qsvd || f == Formulation::aug_rsvd) {
                try {
                    h->s = solve_hpd(p->p, vec, opts);
                    break;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::not_definite)
                        throw;
                }
            }
            h->s = solve_general(p->p, vec, opts);
            break;
        }
        default: fail(ErrorCode::invalid_argument, "unknown solve method");
        }
        *out = h.release();
    });
}

cpfsvd_status cpfsvd_solution_size(const cpfsvd_solution* s, size_t* count)
{
    return guard([&] {
        need(s, "s");
        need(count, "count");
        *count = s->s.values.size();
    });
}

cpfsvd_status cpfsvd_solution_eigenvalue(const cpfsvd_solution* s, size_t index, cpfsvd_eigenvalue* out)
{
    return guard([&] {
        need(s, "s");
        need(out, "out");
        if (index >= s->s.values.size())
            fail(ErrorCode::invalid_argument, "eigenvalue index out of range");
        const auto& v = s->s.values[index];
        out->alpha_re = v.alpha.real();
        out->alpha_im = v.alpha.imag();
        out->beta_re = v.beta.real();
        out->beta_im = v.beta.imag();
        out->cls = static_cast<cpfsvd_eigen_class>(v.cls);
    });
}

cpfsvd_status cpfsvd_solution_counts(const cpfsvd_solution* s, cpfsvd_counts* out)
{
    return guard([&] {
        need(s, "s");
        need(out, "out");
        out->finite_nonzero = s->s.count(EigenClass::finite_nonzero);
        out->zero = s->s.count(EigenClass::zero);
        out->infinite = s->s.count(EigenClass::infinite);
        out->indeterminate = s->s.count(EigenClass::indeterminate);
    });
}

void cpfsvd_solution_destroy(cpfsvd_solution* s) { delete s; }

cpfsvd_status cpfsvd_estimate_sigmas(const cpfsvd_solution* s, cpfsvd_formulation f, double* out, size_t capacity,
                                     size_t* count)
{
    std::vector<double> v;
    const cpfsvd_status st = guard([&] {
        need(s, "s");
        v = estimate_sigmas(s->s, to_formulation(f));
    });
    if (st != CPFSVD_OK)
        return st;
    return copy_values(v, out, capacity, count);
}

cpfsvd_status cpfsvd_triplet_classes(const cpfsvd_solution* s, const cpfsvd_pencil* p,
                                     const cpfsvd_partition* partition, cpfsvd_triplet_counts* out)
{
    return guard([&] {
        need(s, "s");
        need(p, "p");
        need(out, "out");
        std::optional<RsvdPartition> part;
        if (partition)
            part = from_c(*partition);
        const ClassifiedSpectrum cs = classify_spectrum(s->s, p->p, part);
        std::copy(cs.class_counts.begin(), cs.class_counts.end(), out->cls);
        out->zero_jordan_blocks = cs.zero_jordan_blocks;
    });
}

cpfsvd_status cpfsvd_partition_compute(const cpfsvd_matrix* a, const cpfsvd_matrix* b, const cpfsvd_matrix* c,
                                       double tol_rel, cpfsvd_partition* out)
{
    return guard([&] {
        need(a, "a");
        need(out, "out");
        std::optional<double> tol;
        if (tol_rel > 0.0)
            tol = tol_rel;
        RsvdPartition r;
        if (b && c)
            r = partition_from_matrices(a->m, b->m, c->m, tol);
        else if (c)
            r = partition_from_pair(a->m, c->m, tol);
        else if (!b)
            r = partition_from_single(a->m, tol);
        else
            fail(ErrorCode::invalid_argument, "a triplet needs C as well as B");
        *out = to_c(r);
    });
}

cpfsvd_status cpfsvd_predict_counts(cpfsvd_formulation f, const cpfsvd_partition* partition, cpfsvd_counts* out)
{
    return guard([&] {
        need(partition, "partition");
        need(out, "out");
        const KcfStructure k = predict_kcf(to_formulation(f), from_c(*partition));
        out->finite_nonzero = k.finite_nonzero_count();
        out->zero = k.zero_count();
        out->infinite = k.infinite_count();
        out->indeterminate = k.indeterminate_count();
    });
}

cpfsvd_status cpfsvd_predict_describe(cpfsvd_formulation f, const cpfsvd_partition* partition, char* buf,
                                      size_t capacity, size_t* needed)
{
    return text_result(guard([&] {
        need(partition, "partition");
        copy_text(predict_kcf(to_formulation(f), from_c(*partition)).describe(), buf, capacity, needed);
    }));
}

cpfsvd_status cpfsvd_problem_generate(cpfsvd_problem_kind kind, size_t n, double kappa_x, double kappa_y,
                                      double kappa_sigma, uint64_t seed, cpfsvd_problem** out)
{
    return guard([&] {
        need(out, "out");
        *out = nullptr;
        GeneratorConfig cfg;
        cfg.n = n;
        cfg.kappa_x = kappa_x;
        cfg.kappa_y = kappa_y;
        cfg.kappa_sigma = kappa_sigma;
        cfg.seed = seed;
        auto h = std::make_unique<cpfsvd_problem>();
        switch (kind) {
        case CPFSVD_KIND_QSVD: h->g = generate_qsvd(cfg); break;
        case CPFSVD_KIND_RSVD: h->g = generate_rsvd(cfg); break;
        default: fail(ErrorCode::invalid_argument, "the generator supports the qsvd and rsvd kinds");
        }
        *out = h.release();
    });
}

cpfsvd_status cpfsvd_problem_matrix(const cpfsvd_problem* g, char which, cpfsvd_matrix** out)
{
    return guard([&] {
        need(g, "g");
        need(out, "out");
        *out = nullptr;
        const CMatrix* src = nullptr;
        switch (which) {
        case 'A': src = &g->g.a; break;
        case 'B': src = &g->g.b; break;
        case 'C': src = &g->g.c; break;
        default: fail(ErrorCode::invalid_argument, "which must be 'A', 'B' or 'C'");
        }
        if (src->empty())
            fail(ErrorCode::invalid_argument, std::string("problem has no matrix ") + which);
        auto h = std::make_unique<cpfsvd_matrix>();
        h->m = *src;
        *out = h.release();
    });
}

cpfsvd_status cpfsvd_problem_sigmas(const cpfsvd_problem* g, double* out, size_t capacity, size_t* count)
{
    if (!g)
        return set_error(CPFSVD_E_INVALID_ARGUMENT, "g must not be NULL");
    return copy_values(g->g.sigma_working(), out, capacity, count);
}

cpfsvd_status cpfsvd_problem_partition(const cpfsvd_problem* g, cpfsvd_partition* out)
{
    return guard([&] {
        need(g, "g");
        need(out, "out");
        *out = to_c(g->g.partition);
    });
}

cpfsvd_status cpfsvd_problem_write(const cpfsvd_problem* g, const char* dir)
{
    return guard([&] {
        need(g, "g");
        need(dir, "dir");
        write_problem(g->g, dir);
    });
}

cpfsvd_status cpfsvd_problem_verify(const cpfsvd_problem* g, cpfsvd_formulation f, double* off_structure,
                                    double* scale)
{
    return guard([&] {
        need(g, "g");
        const Pencil pen = build_pencil(to_formulation(f), g->g);
        const ReductionReport r = verify_reduction(pen, g->g.factors(), g->g.partition);
        if (off_structure)
            *off_structure = r.off_structure();
        if (scale)
            *scale = r.scale;
    });
}

void cpfsvd_problem_destroy(cpfsvd_problem* g) { delete g; }

double cpfsvd_chordal(double a, double b) { return chordal(a, b); }

cpfsvd_status cpfsvd_sweep_csv(const cpfsvd_sweep_config* cfg, const char* path)
{
    return guard([&] {
        need(cfg, "cfg");
        need(path, "path");
        need(cfg->grid, "cfg->grid");
        need(cfg->formulations, "cfg->formulations");
        SweepConfig s;
        if (static_cast<int>(cfg->kind) < 0 || static_cast<int>(cfg->kind) > CPFSVD_KIND_RSVD)
            fail(ErrorCode::invalid_argument, "unknown problem kind");
        if (static_cast<int>(cfg->axis) < 0 || static_cast<int>(cfg->axis) > CPFSVD_AXIS_KAPPA_XY)
            fail(ErrorCode::invalid_argument, "unknown sweep axis");
        s.kind = static_cast<ProblemKind>(cfg->kind);
        s.axis = static_cast<SweepAxis>(cfg->axis);
        s.grid.assign(cfg->grid, cfg->grid + cfg->grid_size);
        for (size_t i = 0; i < cfg->formulation_count; ++i)
            s.formulations.push_back(to_formulation(cfg->formulations[i]));
        s.samples = cfg->samples;
        s.n = cfg->n;
        s.kappa_x = cfg->kappa_x;
        s.kappa_y = cfg->kappa_y;
        s.kappa_sigma = cfg->kappa_sigma;
        s.seed = cfg->seed;
        s.threads = cfg->threads;
        const SweepSummary summary = run_sweep(s);
        if (std::string(path) == "-") {
            write_sweep_csv(std::cout, summary);
            std::cout.flush();
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out)
            fail(ErrorCode::io, std::string("cannot write ") + path);
        write_sweep_csv(out, summary);
        if (!out)
            fail(ErrorCode::io, std::string("write failed for ") + path);
    });
}

cpfsvd_status cpfsvd_worked_example(uint64_t seed, char* buf, size_t capacity, size_t* needed)
{
    return text_result(guard([&] { copy_text(worked_example(seed).report(), buf, capacity, needed); }));
}

} // extern "C"
