#pragma once

// Accuracy experiments: chordal errors against the extended-precision ground
// truth, condition-number sweeps with median-of-max aggregation, CSV output and
// the small worked example.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cpfsvd/genmat.hpp"
#include "cpfsvd/recovery.hpp"

namespace cpfsvd {

/// |a - b| / (sqrt(1 + a^2) sqrt(1 + b^2)); either argument may be +inf.
double chordal(double a, double b);
/// The same metric evaluated through 1/a and 1/b.
double chordal_reciprocal(double a, double b);

/// Largest d with |exact - approx| < 5 * 10^-(d+1), clamped to [0, 20].
int matched_digits(double exact, double approx);

/// Formulations that apply to a problem kind.
bool applies_to(Formulation f, ProblemKind kind);

Pencil build_pencil(Formulation f, const GeneratedProblem& g);

/// Definite path for the augmented forms when their rhs is positive definite,
/// QZ otherwise. Classification thresholds follow the predicted Jordan indices.
EigenSolution solve_for(const Pencil& pen, const RsvdPartition& part, bool want_vectors = false);

struct ExperimentRecord {
    ProblemKind kind = ProblemKind::qsvd;
    Formulation formulation = Formulation::cpf_qsvd;
    size_t n = 0;
    double kappa_x = 1.0, kappa_y = 1.0, kappa_sigma = 1.0;
    std::uint64_t seed = 0;
    std::vector<double> estimates; ///< decreasing
    std::vector<double> errors;    ///< chordal error per true sigma
    double max_error = 0.0;
    bool failed = false;
    std::string failure;
};

/// Solves one formulation of an already generated problem.
ExperimentRecord evaluate(const GeneratedProblem& g, Formulation f, const GeneratorConfig& cfg);

GeneratedProblem generate(ProblemKind kind, const GeneratorConfig& cfg);

ExperimentRecord run_sample(ProblemKind kind, Formulation f, const GeneratorConfig& cfg);

enum class SweepAxis { kappa_y, kappa_sigma, kappa_xy };

std::string_view to_string(SweepAxis a);
SweepAxis parse_sweep_axis(std::string_view s);

struct SweepConfig {
    ProblemKind kind = ProblemKind::qsvd;
    SweepAxis axis = SweepAxis::kappa_y;
    std::vector<double> grid;
    size_t samples = 100;
    std::vector<Formulation> formulations;
    size_t n = 10;
    /// Values of the parameters not swept.
    double kappa_x = 10.0, kappa_y = 10.0, kappa_sigma = 10.0;
    std::uint64_t seed = 1;
    unsigned threads = 0; ///< 0 picks the hardware concurrency
};

struct SweepCell {
    double axis_value = 0.0;
    Formulation formulation = Formulation::cpf_qsvd;
    GeneratorConfig config; ///< seed field unused
    size_t samples = 0;
    size_t failures = 0;
    double median_max_error = 0.0; ///< NaN when every sample failed
};

struct SweepSummary {
    SweepAxis axis = SweepAxis::kappa_y;
    ProblemKind kind = ProblemKind::qsvd;
    std::vector<double> grid;
    std::vector<SweepCell> cells; ///< grid-major, formulations in config order

    /// Throws invalid_argument when the cell is absent.
    const SweepCell& cell(double axis_value, Formulation f) const;
};

/// Seed of sample s in grid cell c, derived from the base seed by splitmix64.
std::uint64_t sample_seed(std::uint64_t base, size_t cell, size_t sample);

/// Every formulation in a cell sees the same generated problems.
SweepSummary run_sweep(const SweepConfig& cfg);

void write_sweep_csv(std::ostream& out, const SweepSummary& s);

/// Powers of ten 10^lo .. 10^hi with the given exponent step.
std::vector<double> decade_grid(int lo, int hi, int step = 1);

/// Least-squares slope of log10(median) against log10(axis value) for one
/// formulation over the cells with axis value >= from.
double loglog_slope(const SweepSummary& s, Formulation f, double from = 0.0);

struct WorkedExample {
    GeneratorConfig config;
    std::vector<DoubleDouble> exact;
    std::vector<double> sq;                 ///< square roots of the squared-pencil eigenvalues
    std::vector<double> aug_magnitudes;     ///< all 2n magnitudes, decreasing
    std::vector<std::vector<double>> cpf_magnitudes_squared; ///< |lambda|^2 per quadruple, by slot
    std::vector<double> cpf;                ///< geometric means
    std::vector<double> aug;                ///< paired aug estimates
    std::vector<int> digits_sq, digits_aug, digits_cpf;

    std::string report() const;
};

/// n = 4, kappa_Y = 1e7, kappa_Sigma = 10.
WorkedExample worked_example(std::uint64_t seed = 2021);

} // namespace cpfsvd
