#pragma once

// Reduction of multisymplectic Lie systems by unimodular symmetry algebras.

#include <complex>
#include <string>
#include <vector>

#include "mslie/msys.hpp"

namespace mslie {

// Coordinate quotient: projection total -> base, a section base -> total and
// fields spanning the fibers.
struct QuotientChart {
    std::string name;
    SmoothMap projection;
    SmoothMap section;
    std::vector<VectorField> fiberFlows;

    const ChartPtr& total() const { return projection.source(); }
    const ChartPtr& base() const { return projection.target(); }
};

Report verifyQuotient(const QuotientChart& q, const std::vector<Point>& baseSamples, const std::vector<Point>& totalSamples,
                      const DiffBackend& b = DiffBackend::analytic(), double tol = 1e-10);

struct ReductionScheme {
    std::string name;
    FieldFamily symmetryFamily;
    MultiVectorField w;
    DifferentialForm theta;
    QuotientChart quotient;

    // i_w Theta
    DifferentialForm noetherForm() const { return contractField(w, theta); }
};

// (i_w Theta)(x)
AlternatingTensor momentumMap(const Point& x, const MultiVectorField& w, const DifferentialForm& theta);

Report verifyReductionScheme(const ReductionScheme& s, const std::vector<Point>& samples,
                             const DiffBackend& b = DiffBackend::analytic(), const Tolerances& tol = {});

inline constexpr double kFiberShift = 0.3;
inline constexpr double kFiberTolerance = 1e-6;

struct ReducedForm {
    DifferentialForm form;
    double fiberResidual = 0.0;
};

// section^*(i_w Theta), certified against the same form read off at fiber-shifted points.
ReducedForm reduceForm(const ReductionScheme& s, const std::vector<Point>& baseSamples,
                       const DiffBackend& b = DiffBackend::analytic(), double tol = kFiberTolerance);

struct ProjectedField {
    VectorField field;
    double wellDefResidual = 0.0;
};

ProjectedField projectField(const VectorField& X, const QuotientChart& q, const std::vector<Point>& baseSamples,
                            const DiffBackend& b = DiffBackend::analytic(), double tol = kFiberTolerance);

struct ReducedSystem {
    MultisymplecticLieSystem system;
    std::vector<int> kept;  // indices of the basis fields that survive projection
    double fiberResidual = 0.0;
    double projectionResidual = 0.0;
};

ReducedSystem reduceSystem(const MultisymplecticLieSystem& m, const ReductionScheme& s, const std::vector<Point>& totalSamples,
                           const std::vector<Point>& baseSamples, const DiffBackend& b = DiffBackend::analytic());

struct Equilibrium {
    Point guess;
    Point point;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    std::vector<std::complex<double>> eigenvalues;
};

// Newton on X(y) = 0 from each guess (tolerance 1e-12, at most 50 iterations).
std::vector<Equilibrium> relativeEquilibria(const VectorField& X, const std::vector<Point>& guesses,
                                            const DiffBackend& b = DiffBackend::analytic());

}  // namespace mslie
