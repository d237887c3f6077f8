#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cpfsvd/cpfsvd.h"

namespace {

cpfsvd_matrix* make(size_t r, size_t c, std::vector<double> re)
{
    cpfsvd_matrix* m = nullptr;
    EXPECT_EQ(cpfsvd_matrix_create(r, c, re.data(), nullptr, &m), CPFSVD_OK);
    return m;
}

} // namespace

TEST(CApi, StatusAndNames)
{
    EXPECT_STREQ(cpfsvd_status_string(CPFSVD_OK), "ok");
    EXPECT_NE(std::string(cpfsvd_version()).size(), 0u);
    cpfsvd_formulation f;
    ASSERT_EQ(cpfsvd_formulation_from_name("cpf-rsvd", &f), CPFSVD_OK);
    EXPECT_EQ(f, CPFSVD_CPF_RSVD);
    EXPECT_STREQ(cpfsvd_formulation_name(CPFSVD_AUG_QSVD), "aug-qsvd");
    EXPECT_EQ(cpfsvd_formulation_from_name("xyz", &f), CPFSVD_E_INVALID_ARGUMENT);
    EXPECT_NE(std::string(cpfsvd_last_error()).find("xyz"), std::string::npos);
    EXPECT_EQ(cpfsvd_formulation_from_name(nullptr, &f), CPFSVD_E_INVALID_ARGUMENT);
    cpfsvd_matrix_destroy(nullptr);
    cpfsvd_pencil_destroy(nullptr);
}

TEST(CApi, MatrixLifecycle)
{
    cpfsvd_matrix* m = nullptr;
    const double re[] = {1, 2, 3, 4, 5, 6};
    const double im[] = {0, 0, 0, 0, 0, -1};
    ASSERT_EQ(cpfsvd_matrix_create(2, 3, re, im, &m), CPFSVD_OK);
    size_t r = 0, c = 0;
    ASSERT_EQ(cpfsvd_matrix_shape(m, &r, &c), CPFSVD_OK);
    EXPECT_EQ(r, 2u);
    EXPECT_EQ(c, 3u);
    double ore[6], oim[6];
    ASSERT_EQ(cpfsvd_matrix_copy_out(m, ore, oim), CPFSVD_OK);
    for (int i = 0; i < 6; ++i) {
        EXPECT_EQ(ore[i], re[i]);
        EXPECT_EQ(oim[i], im[i]);
    }
    const auto path = (std::filesystem::temp_directory_path() / "cpfsvd_capi_m.txt").string();
    ASSERT_EQ(cpfsvd_matrix_write(m, path.c_str()), CPFSVD_OK);
    cpfsvd_matrix* back = nullptr;
    ASSERT_EQ(cpfsvd_matrix_read(path.c_str(), &back), CPFSVD_OK);
    ASSERT_EQ(cpfsvd_matrix_copy_out(back, ore, oim), CPFSVD_OK);
    EXPECT_EQ(ore[4], 5.0);
    EXPECT_EQ(oim[5], -1.0);
    std::remove(path.c_str());
    EXPECT_EQ(cpfsvd_matrix_read("/nonexistent/dir/m.txt", &back), CPFSVD_E_IO);
    cpfsvd_matrix_destroy(back);
    cpfsvd_matrix_destroy(m);
    EXPECT_EQ(cpfsvd_matrix_create(2, 2, nullptr, nullptr, &m), CPFSVD_E_INVALID_ARGUMENT);
}

TEST(CApi, SolveDiagonalPair)
{
    // A = diag(3, 1), C = I: quotient singular values 3 and 1
    cpfsvd_matrix* a = make(2, 2, {3, 0, 0, 1});
    cpfsvd_matrix* c = make(2, 2, {1, 0, 0, 1});
    cpfsvd_pencil* p = nullptr;
    ASSERT_EQ(cpfsvd_pencil_build(CPFSVD_CPF_QSVD, a, nullptr, c, &p), CPFSVD_OK);
    size_t dim = 0;
    ASSERT_EQ(cpfsvd_pencil_dim(p, &dim), CPFSVD_OK);
    EXPECT_EQ(dim, 8u);
    cpfsvd_solution* s = nullptr;
    ASSERT_EQ(cpfsvd_solve(p, CPFSVD_METHOD_AUTO, 0, nullptr, &s), CPFSVD_OK);
    cpfsvd_counts counts;
    ASSERT_EQ(cpfsvd_solution_counts(s, &counts), CPFSVD_OK);
    EXPECT_EQ(counts.finite_nonzero, 8u);
    double sig[2];
    size_t n = 0;
    EXPECT_EQ(cpfsvd_estimate_sigmas(s, CPFSVD_CPF_QSVD, sig, 1, &n), CPFSVD_E_BUFFER_TOO_SMALL);
    EXPECT_EQ(n, 2u);
    ASSERT_EQ(cpfsvd_estimate_sigmas(s, CPFSVD_CPF_QSVD, sig, 2, &n), CPFSVD_OK);
    EXPECT_NEAR(sig[0], 3.0, 1e-14);
    EXPECT_NEAR(sig[1], 1.0, 1e-14);
    cpfsvd_triplet_counts tc;
    ASSERT_EQ(cpfsvd_triplet_classes(s, p, nullptr, &tc), CPFSVD_OK);
    EXPECT_EQ(tc.cls[0], 2u);
    cpfsvd_eigenvalue ev;
    EXPECT_EQ(cpfsvd_solution_eigenvalue(s, 8, &ev), CPFSVD_E_INVALID_ARGUMENT);
    // the squared pencil needs only A and C too, the triplet pencil needs B
    cpfsvd_pencil* bad = nullptr;
    EXPECT_EQ(cpfsvd_pencil_build(CPFSVD_CPF_RSVD, a, nullptr, c, &bad), CPFSVD_E_INVALID_ARGUMENT);
    EXPECT_EQ(cpfsvd_solve(p, CPFSVD_METHOD_HPD, 0, nullptr, &s), CPFSVD_E_NOT_DEFINITE);
    cpfsvd_solution_destroy(s);
    cpfsvd_pencil_destroy(p);
    cpfsvd_matrix_destroy(a);
    cpfsvd_matrix_destroy(c);
}

TEST(CApi, DimensionMismatch)
{
    cpfsvd_matrix* a = make(2, 2, {1, 0, 0, 1});
    cpfsvd_matrix* c = make(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    cpfsvd_pencil* p = nullptr;
    EXPECT_EQ(cpfsvd_pencil_build(CPFSVD_CPF_QSVD, a, nullptr, c, &p), CPFSVD_E_DIMENSION);
    cpfsvd_matrix_destroy(a);
    cpfsvd_matrix_destroy(c);
}

TEST(CApi, PartitionAndPrediction)
{
    // A = diag(1, 0, 0), B = e2, C = e3^T
    cpfsvd_matrix* a = make(3, 3, {1, 0, 0, 0, 0, 0, 0, 0, 0});
    cpfsvd_matrix* b = make(3, 1, {0, 1, 0});
    cpfsvd_matrix* c = make(1, 3, {0, 0, 1});
    cpfsvd_partition part;
    ASSERT_EQ(cpfsvd_partition_compute(a, b, c, 0.0, &part), CPFSVD_OK);
    EXPECT_EQ(part.p[3], 1u);
    EXPECT_EQ(part.p[4], 1u);
    EXPECT_EQ(part.p[5], 1u);
    EXPECT_EQ(part.q[0], 1u);
    cpfsvd_counts k;
    ASSERT_EQ(cpfsvd_predict_counts(CPFSVD_CPF_RSVD, &part, &k), CPFSVD_OK);
    EXPECT_EQ(k.zero, 4u);
    EXPECT_EQ(k.infinite, 2u);
    EXPECT_EQ(k.indeterminate, 2u);
    size_t needed = 0;
    char small[4];
    EXPECT_EQ(cpfsvd_predict_describe(CPFSVD_CPF_RSVD, &part, small, sizeof small, &needed),
              CPFSVD_E_BUFFER_TOO_SMALL);
    std::string text(needed, '\0');
    ASSERT_EQ(cpfsvd_predict_describe(CPFSVD_CPF_RSVD, &part, text.data(), text.size(), &needed), CPFSVD_OK);
    EXPECT_NE(text.find("J"), std::string::npos);

    cpfsvd_partition broken = part;
    broken.p[0] = 5;
    EXPECT_EQ(cpfsvd_predict_counts(CPFSVD_CPF_RSVD, &broken, &k), CPFSVD_E_STRUCTURE);

    cpfsvd_pencil* p = nullptr;
    ASSERT_EQ(cpfsvd_pencil_build(CPFSVD_CPF_RSVD, a, b, c, &p), CPFSVD_OK);
    cpfsvd_solution* s = nullptr;
    ASSERT_EQ(cpfsvd_solve(p, CPFSVD_METHOD_GENERAL, 0, &part, &s), CPFSVD_OK);
    cpfsvd_counts obs;
    ASSERT_EQ(cpfsvd_solution_counts(s, &obs), CPFSVD_OK);
    EXPECT_EQ(obs.zero, 4u);
    EXPECT_EQ(obs.infinite, 2u);
    EXPECT_EQ(obs.indeterminate, 2u);
    cpfsvd_triplet_counts tc;
    EXPECT_EQ(cpfsvd_triplet_classes(s, p, nullptr, &tc), CPFSVD_E_INVALID_ARGUMENT);
    ASSERT_EQ(cpfsvd_triplet_classes(s, p, &part, &tc), CPFSVD_OK);
    EXPECT_EQ(tc.cls[3], 2u);
    EXPECT_EQ(tc.cls[4], 2u);
    EXPECT_EQ(tc.cls[5], 2u);
    cpfsvd_solution_destroy(s);
    cpfsvd_pencil_destroy(p);
    cpfsvd_matrix_destroy(a);
    cpfsvd_matrix_destroy(b);
    cpfsvd_matrix_destroy(c);
}

TEST(CApi, GeneratedProblemRoundTrip)
{
    cpfsvd_problem* g = nullptr;
    ASSERT_EQ(cpfsvd_problem_generate(CPFSVD_KIND_RSVD, 5, 10, 100, 10, 3, &g), CPFSVD_OK);
    double truth[5];
    size_t n = 0;
    ASSERT_EQ(cpfsvd_problem_sigmas(g, truth, 5, &n), CPFSVD_OK);
    cpfsvd_matrix *a = nullptr, *b = nullptr, *c = nullptr;
    ASSERT_EQ(cpfsvd_problem_matrix(g, 'A', &a), CPFSVD_OK);
    ASSERT_EQ(cpfsvd_problem_matrix(g, 'B', &b), CPFSVD_OK);
    ASSERT_EQ(cpfsvd_problem_matrix(g, 'C', &c), CPFSVD_OK);
    cpfsvd_matrix* none = nullptr;
    EXPECT_EQ(cpfsvd_problem_matrix(g, 'D', &none), CPFSVD_E_INVALID_ARGUMENT);
    cpfsvd_partition part;
    ASSERT_EQ(cpfsvd_problem_partition(g, &part), CPFSVD_OK);
    EXPECT_EQ(part.p[0], 5u);

    cpfsvd_pencil* p = nullptr;
    ASSERT_EQ(cpfsvd_pencil_build(CPFSVD_CPF_RSVD, a, b, c, &p), CPFSVD_OK);
    cpfsvd_solution* s = nullptr;
    ASSERT_EQ(cpfsvd_solve(p, CPFSVD_METHOD_AUTO, 0, &part, &s), CPFSVD_OK);
    double est[5];
    ASSERT_EQ(cpfsvd_estimate_sigmas(s, CPFSVD_CPF_RSVD, est, 5, &n), CPFSVD_OK);
    for (int i = 0; i < 5; ++i)
        EXPECT_LT(cpfsvd_chordal(est[i], truth[i]), 1e-12);

    double off = 0, scale = 0;
    ASSERT_EQ(cpfsvd_problem_verify(g, CPFSVD_CPF_RSVD, &off, &scale), CPFSVD_OK);
    EXPECT_LT(off, 1e-12 * scale);
    const auto dir = std::filesystem::temp_directory_path() / "cpfsvd_capi_problem";
    ASSERT_EQ(cpfsvd_problem_write(g, dir.string().c_str()), CPFSVD_OK);
    EXPECT_TRUE(std::filesystem::exists(dir / "truth.txt"));
    std::filesystem::remove_all(dir);

    cpfsvd_solution_destroy(s);
    cpfsvd_pencil_destroy(p);
    cpfsvd_matrix_destroy(a);
    cpfsvd_matrix_destroy(b);
    cpfsvd_matrix_destroy(c);
    cpfsvd_problem_destroy(g);
}

TEST(CApi, SweepToFile)
{
    const double grid[] = {10.0, 1000.0};
    const cpfsvd_formulation forms[] = {CPFSVD_AUG_QSVD, CPFSVD_CPF_QSVD};
    cpfsvd_sweep_config cfg{};
    cfg.kind = CPFSVD_KIND_QSVD;
    cfg.axis = CPFSVD_AXIS_KAPPA_Y;
    cfg.grid = grid;
    cfg.grid_size = 2;
    cfg.formulations = forms;
    cfg.formulation_count = 2;
    cfg.samples = 2;
    cfg.n = 4;
    cfg.kappa_x = cfg.kappa_y = cfg.kappa_sigma = 10;
    cfg.seed = 5;
    cfg.threads = 1;
    const auto path = (std::filesystem::temp_directory_path() / "cpfsvd_capi_sweep.csv").string();
    ASSERT_EQ(cpfsvd_sweep_csv(&cfg, path.c_str()), CPFSVD_OK);
    std::ifstream in(path);
    std::string line;
    size_t lines = 0;
    while (std::getline(in, line))
        ++lines;
    EXPECT_EQ(lines, 5u);
    std::remove(path.c_str());
    cfg.grid_size = 0;
    EXPECT_EQ(cpfsvd_sweep_csv(&cfg, path.c_str()), CPFSVD_E_INVALID_ARGUMENT);
}

TEST(CApi, WorkedExampleText)
{
    size_t needed = 0;
    EXPECT_EQ(cpfsvd_worked_example(2021, nullptr, 0, &needed), CPFSVD_E_BUFFER_TOO_SMALL);
    ASSERT_GT(needed, 1u);
    std::string buf(needed, '\0');
    ASSERT_EQ(cpfsvd_worked_example(2021, buf.data(), buf.size(), &needed), CPFSVD_OK);
    EXPECT_NE(buf.find("3.162277660168"), std::string::npos);
}
