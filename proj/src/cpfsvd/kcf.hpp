#pragma once

// Kronecker canonical structure of the pencil formulations: rank-based
// partitions of the decompositions, predicted block multisets, the explicit
// 4x4 reductions, and a verifier that replays the block-diagonalizing
// transformation chain on concrete instances.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpfsvd/eigensolve.hpp"
#include "cpfsvd/pencils.hpp"

namespace cpfsvd {

enum class KcfBlockKind { zero_block, l_right, l_left, n_infinite, j_finite };

struct KcfBlock {
    KcfBlockKind kind = KcfBlockKind::j_finite;
    size_t rows = 0; ///< zero block only
    size_t cols = 0; ///< zero block only
    size_t size = 0; ///< minimal index for L kinds, block size for N and J
    cplx eigenvalue{};
    bool eigenvalue_known = true; ///< false for J blocks whose sigma was not supplied

    size_t row_dim() const;
    size_t col_dim() const;
    bool at_zero() const { return kind == KcfBlockKind::j_finite && eigenvalue_known && eigenvalue == cplx(0.0); }
};

struct KcfStructure {
    std::vector<KcfBlock> blocks;

    size_t rows() const;
    size_t cols() const;

    /// Eigenvalue counts implied by the blocks.
    size_t infinite_count() const;       ///< sum of N sizes
    size_t zero_count() const;           ///< sum of J(0) sizes
    size_t finite_nonzero_count() const; ///< sum of J(z != 0) sizes
    size_t indeterminate_count() const;  ///< zero-block dimension

    /// Largest Jordan block size at zero and at infinity (1 if none).
    unsigned max_zero_index() const;
    unsigned max_infinite_index() const;

    /// One line per distinct block type with its multiplicity.
    std::string describe() const;
};

/// Classification options matching the Jordan indices of a predicted structure.
ClassifyOptions classify_options_for(const KcfStructure& s);

struct RankSet {
    size_t a = 0, b = 0, c = 0, ab = 0, ac = 0, abc = 0;
};

/// Block counts of the restricted decomposition. Index k holds the count with
/// subscript k+1, e.g. p[0] is p1.
struct RsvdPartition {
    std::array<size_t, 6> p{};
    std::array<size_t, 6> q{};
    std::array<size_t, 4> m{};
    std::array<size_t, 4> n{};
    RankSet ranks;

    size_t p_total() const;
    size_t q_total() const;
    size_t m_total() const;
    size_t n_total() const;
};

struct QsvdPartition {
    std::array<size_t, 3> p{};
    std::array<size_t, 4> q{};
    std::array<size_t, 3> n{};
};

struct OsvdPartition {
    std::array<size_t, 2> p{};
    std::array<size_t, 2> q{};
};

/// Derives all counts from the six ranks. Throws inconsistent_structure naming
/// the identity that would produce a negative count.
RsvdPartition partition_from_ranks(size_t p, size_t q, size_t m, size_t n, const RankSet& r);

/// Builds the partition from its free counts p1..p6, q1, q2, m3, n4; the other
/// counts and the six ranks follow from the identities.
RsvdPartition partition_from_counts(const std::array<size_t, 6>& p, size_t q1, size_t q2, size_t m3, size_t n4);

/// Ranks of A, B, C, [A B], [A; C] and [A B; C 0].
RankSet compute_ranks(const CMatrix& a, const CMatrix& b, const CMatrix& c, std::optional<double> tol_rel = {});

RsvdPartition partition_from_matrices(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                                      std::optional<double> tol_rel = {});
/// The pair (A, C) viewed as the triplet (A, I, C).
RsvdPartition partition_from_pair(const CMatrix& a, const CMatrix& c, std::optional<double> tol_rel = {});
/// A viewed as the triplet (A, I, I).
RsvdPartition partition_from_single(const CMatrix& a, std::optional<double> tol_rel = {});

/// Embeddings of the smaller decompositions as triplets (A, I, C) and (A, I, I).
RsvdPartition embed(const QsvdPartition& s);
RsvdPartition embed(const OsvdPartition& s);
/// Inverse embeddings; throw inconsistent_structure when the triplet counts do
/// not come from a pair (or a single matrix).
QsvdPartition to_qsvd(const RsvdPartition& r);
OsvdPartition to_osvd(const RsvdPartition& r);

/// Predicted block multiset. sigmas holds the p1 finite nonzero singular
/// values, or is empty when only counts are needed. qqqq is not supported.
KcfStructure predict_kcf(Formulation f, const RsvdPartition& part, std::span<const double> sigmas = {});

enum class LemmaKind { osvd, qsvd, rsvd };

struct LemmaReduction {
    double sigma = 0.0;
    Pencil source;   ///< the 4x4 pencil of the lemma
    CMatrix x, y;    ///< transformations with y* (source) x = target
    Pencil target;   ///< diag(sqrt(s), -sqrt(s), i sqrt(s), -i sqrt(s)) - lambda I
    double error_constant = 0.0; ///< max |y* lhs x - target.lhs| / max |target.lhs|
    double error_lambda = 0.0;   ///< max |y* rhs x - I|
};

/// For osvd alpha is sigma and beta, gamma are ignored; for qsvd beta is ignored.
LemmaReduction lemma_reduce(LemmaKind kind, double alpha, double beta = 1.0, double gamma = 1.0);

/// Ground-truth decomposition factors in extended precision. Which factors are
/// needed depends on the pencil: svd uses u, v; qsvd uses u, v, y; rsvd uses
/// x, y, u, v. alpha, beta, gamma hold the p1 regular values (beta = 1 and
/// gamma = 1 where they do not apply).
struct ReductionFactors {
    XMatrix u, v, x, y;
    std::vector<double> alpha, beta, gamma;
};

struct ReductionReport {
    double off_structure_constant = 0.0; ///< max deviation of the lambda^0 coefficient from the predicted form
    double off_structure_lambda = 0.0;   ///< same for the lambda^1 coefficient
    double off_block = 0.0;              ///< max entry outside the diagonal groups (either coefficient)
    double scale = 0.0;                  ///< max(||lhs||_2, ||rhs||_2) of the input pencil

    double off_structure() const { return std::max(off_structure_constant, off_structure_lambda); }
    bool passes(double rel_tol) const { return off_structure() <= rel_tol * scale; }
};

/// Applies the factor congruence, the block permutations and the per-sigma
/// reductions to P and measures the distance from the predicted block-diagonal
/// form. Supports the cpf forms and the augmented forms; P must be real.
ReductionReport verify_reduction(const Pencil& p, const ReductionFactors& factors, const RsvdPartition& part);

struct CountCheck {
    EigenClass cls;
    size_t predicted = 0;
    size_t observed = 0;
    bool pass() const { return predicted == observed; }
};

struct SpectrumCountReport {
    std::array<CountCheck, 4> checks; ///< finite, zero, infinite, indeterminate
    bool all_pass() const;
};

SpectrumCountReport spectrum_counts_check(const EigenSolution& sol, const KcfStructure& predicted);

} // namespace cpfsvd
