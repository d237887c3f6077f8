#pragma once

// Turns pencil spectra into singular values and vectors: grouping of the
// quadruples +-sqrt(s), +-i sqrt(s) of the cross-product-free pencils, the
// geometric-mean estimate, triplet classification and eigenvector slicing.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "cpfsvd/eigensolve.hpp"
#include "cpfsvd/kcf.hpp"

namespace cpfsvd {

enum class TripletClass { regular, one_one_zero, one_zero_one, one_zero_zero, zero_one_one, trivial };

std::string_view to_string(TripletClass c);

struct SingularTriplet {
    TripletClass cls = TripletClass::regular;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double sigma = 0.0; ///< +inf for the infinite classes, NaN for trivial
    double phase_residual = 0.0;
};

/// Four eigenvalues of one finite nonzero singular value. members[k] indexes the
/// eigenvalue near sqrt(sigma) * w_k with w = (1, -1, i, -i).
struct Quadruple {
    std::array<size_t, 4> members{};
    double sigma = 0.0;
    double phase_residual = 0.0; ///< largest |arg(lambda_k / w_k)|
};

/// Slot unit w_k for k = 0..3.
cplx quadrant_unit(size_t k);

struct GroupingOptions {
    /// Largest relative spread of lambda^4 inside one quadruple.
    double rel_tol = 1e-3;
    /// Largest accepted phase deviation from the ideal pattern.
    double max_phase = 0.3926990816987241; // pi / 8
};

/// Partitions the finite nonzero eigenvalues of values into quadruples. Indices
/// refer to positions in values. Throws inconsistent_structure when the count
/// is not divisible by four or a quadruple cannot be formed within tolerance.
std::vector<Quadruple> group_quadruples(std::span<const GeneralizedEigenvalue> values,
                                        const GroupingOptions& options = {});

/// (|l1| |l2| |l3| |l4|)^(1/2).
double geometric_mean_sigma(std::span<const double> magnitudes);
double geometric_mean_sigma(std::span<const GeneralizedEigenvalue> values, const Quadruple& q);

struct ClassifiedSpectrum {
    std::vector<SingularTriplet> triplets; ///< regular ones first, by decreasing sigma
    std::vector<Quadruple> quadruples;     ///< same order as the regular triplets
    std::array<size_t, 6> class_counts{};  ///< indexed by TripletClass
    size_t zero_jordan_blocks = 0;         ///< number of J2(0) blocks seen
    std::optional<size_t> min_p5_q2;       ///< min{p5, q2} when a partition was supplied

    size_t count(TripletClass c) const { return class_counts[static_cast<size_t>(c)]; }
};

/// Maps the spectrum of a cpf pencil to triplets, one per KCF block family
/// member. For cpf-rsvd with infinite eigenvalues the split between N1 and N3
/// blocks needs the rank partition; for cpf-qsvd and cpf-svd it follows from
/// the pencil dimensions. When a partition is given the observed counts must
/// agree with it.
ClassifiedSpectrum classify_spectrum(const EigenSolution& sol, const Pencil& pen,
                                     const std::optional<RsvdPartition>& part = std::nullopt,
                                     const GroupingOptions& options = {});

struct RecoveredVectors {
    std::vector<cplx> u; ///< unit, dimension m (p for pairs)
    std::vector<cplx> v; ///< unit, dimension n
    std::vector<cplx> z; ///< direction of y / gamma, dimension q
    std::vector<cplx> x; ///< direction of x / beta, dimension p
    double sigma = 0.0;
    size_t member = 0;         ///< quadruple slot whose eigenvector was used
    double residual_a = 0.0;   ///< ||A z - sigma B u||
    double residual_c = 0.0;   ///< ||C z - v||
};

/// Slices the eigenvector of the best quadruple member by the pencil block
/// layout. Throws solver_failure when no member yields a usable vector.
RecoveredVectors extract_vectors(const Pencil& pen, const EigenSolution& sol, const Quadruple& q);

/// Singular value estimates of a solved pencil, in decreasing order: square
/// roots for the squared forms, paired magnitudes for the augmented forms and
/// quadruple geometric means for the cpf forms.
std::vector<double> estimate_sigmas(const EigenSolution& sol, Formulation f, const GroupingOptions& options = {});

} // namespace cpfsvd
