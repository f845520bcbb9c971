#pragma once

// Recovering an ambient system and form from several of its reductions.

#include <vector>

#include "mslie/reduction.hpp"

namespace mslie {

inline constexpr double kIncompatibleTolerance = 1e-6;

// dim of the intersection of ker T_g pi_i
int kernelIntersectionDim(const std::vector<QuotientChart>& projections, const Point& g,
                          const DiffBackend& b = DiffBackend::analytic());

struct FieldReconstruction {
    Point value;
    double residual = 0.0;
};

// Solves T_g pi_i X(g) = X^i(pi_i(g)) for all i.
FieldReconstruction reconstructField(const std::vector<VectorField>& projected, const std::vector<QuotientChart>& projections,
                                     const Point& g, const DiffBackend& b = DiffBackend::analytic());
// Same with time-dependent reduced systems evaluated at t.
FieldReconstruction reconstructField(const std::vector<LieSystem>& projected, const std::vector<QuotientChart>& projections,
                                     const Point& g, double t, const DiffBackend& b = DiffBackend::analytic());

struct AnnihilatorIntersection {
    int dim = 0;
    // The multivectors have different degrees; uniqueness is then outside the stated hypotheses.
    bool mixedDegrees = false;
};
AnnihilatorIntersection annihilatorIntersectionDim(const std::vector<MultiVectorField>& multivectors, int ell, const Point& g);

struct ReducedInvariant {
    DifferentialForm form;  // on the base of quotient
    MultiVectorField Z;     // on the total space
    QuotientChart quotient;
};

struct FormReconstruction {
    AlternatingTensor value;
    double residual = 0.0;
    bool mixedDegrees = false;
};

// Solves i_{Z_i(g)} Theta(g) = (pi_i^* Theta^i)(g) for the ell-form Theta(g).
FormReconstruction reconstructForm(const std::vector<ReducedInvariant>& invariants, int ell, const Point& g,
                                   const DiffBackend& b = DiffBackend::analytic());

}  // namespace mslie
