#pragma once

// Random test problems with prescribed condition numbers and exactly known
// singular values. Everything after sampling the orthogonal factors is done in
// double-double and only the final matrices are rounded to binary64.

#include <cstdint>
#include <string>
#include <vector>

#include "cpfsvd/kcf.hpp"
#include "cpfsvd/matcore.hpp"

namespace cpfsvd {

struct GeneratorConfig {
    size_t n = 4;
    double kappa_y = 1.0;
    double kappa_x = 1.0; ///< triplets only
    double kappa_sigma = 1.0;
    std::uint64_t seed = 0;
};

enum class ProblemKind { svd, qsvd, rsvd };

std::string_view to_string(ProblemKind k);
ProblemKind parse_problem_kind(std::string_view s);

struct GeneratedProblem {
    ProblemKind kind = ProblemKind::qsvd;
    CMatrix a, b, c; ///< b is empty for pairs, b and c are empty for svd
    /// Regular values in decreasing sigma order; beta = 1 for pairs.
    std::vector<DoubleDouble> sigma, alpha, beta, gamma;
    /// Factors actually used to assemble the matrices (x empty unless rsvd, y empty for svd).
    XMatrix u, v, x, y;
    RsvdPartition partition;

    ReductionFactors factors() const;
    std::vector<double> sigma_working() const;
};

/// sigma_j = kappa^(1/2 - (j-1)/(n-1)), j = 1..n, in extended precision.
std::vector<DoubleDouble> true_sigma_grid(size_t n, double kappa_sigma);

/// U diag(eta) V^T with eta on the same geometric grid, so that its 2-norm
/// condition number is kappa.
XMatrix conditioned_matrix(size_t n, double kappa, Rng& rng);

/// Square pair: A = U S_alpha Y^-1, C = V S_gamma Y^-1.
GeneratedProblem generate_qsvd(const GeneratorConfig& cfg);

/// Square triplet: A = X^-T S_alpha Y^-1, B = X^-T U^T, C = V S_gamma Y^-1.
GeneratedProblem generate_rsvd(const GeneratorConfig& cfg);

/// Problem with a prescribed (possibly rank-deficient) block structure, built
/// from the canonical form of the decomposition and random factors whose
/// condition numbers are at most kappa. For svd and qsvd kinds the partition
/// must come from a single matrix or a pair (see embed). Regular sigma are
/// drawn log-uniformly from [0.1, 10] and beta from [0.5, 2].
GeneratedProblem generate_structured(ProblemKind kind, const RsvdPartition& part, double kappa, std::uint64_t seed);

/// Random partition with every free count in [0, max_count] and p1 >= 1.
RsvdPartition random_partition(ProblemKind kind, size_t max_count, Rng& rng);

/// Writes A.txt, B.txt, C.txt (as present), truth.txt and the factor files
/// U.txt, V.txt, X.txt, Y.txt into dir, creating it if needed.
void write_problem(const GeneratedProblem& g, const std::string& dir);

/// Reads factors and regular values written by write_problem.
ReductionFactors read_factors(const std::string& dir);

} // namespace cpfsvd
