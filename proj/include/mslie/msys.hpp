#pragma once

// Lie systems carrying a compatible multisymplectic form.

#include <string>
#include <vector>

#include "mslie/liealg.hpp"
#include "mslie/report.hpp"

namespace mslie {

struct MultisymplecticLieSystem {
    std::string name;
    LieSystem system;
    DifferentialForm theta;

    const FieldFamily& basis() const { return system.basis; }
};

// A field together with a candidate (k-2)-form Upsilon with d Upsilon = i_X Theta.
struct HamiltonianPair {
    VectorField field;
    DifferentialForm hamForm;
};

struct Tolerances {
    double analytic = 1e-7;
    double finiteDifference = 1e-4;
    double forBackend(const DiffBackend& b) const { return b.isAnalytic() ? analytic : finiteDifference; }
};

// max |L_X Theta| over the samples
double locallyHamiltonianResidual(const VectorField& X, const DifferentialForm& theta, const std::vector<Point>& samples,
                                  const DiffBackend& b = DiffBackend::analytic());

// max |d Upsilon - i_X Theta| over the samples
double verifyHamiltonianForm(const HamiltonianPair& p, const DifferentialForm& theta, const std::vector<Point>& samples,
                             const DiffBackend& b = DiffBackend::analytic());

// {Upsilon_X, Upsilon_Y} = i_Y i_X Theta
DifferentialForm bracketHamiltonianForms(const HamiltonianPair& pX, const HamiltonianPair& pY, const DifferentialForm& theta);

// {xi, zeta} = i_[Y,X] Theta for xi = i_X Theta and zeta = i_Y Theta. Both identities are
// checked at the samples first; a mismatch throws NotHamiltonian.
DifferentialForm bracketHamiltonianK1Forms(const DifferentialForm& xi, const VectorField& X, const DifferentialForm& zeta,
                                           const VectorField& Y, const DifferentialForm& theta, const std::vector<Point>& samples,
                                           const DiffBackend& b = DiffBackend::analytic(), double tol = 1e-8);

Report validateSystem(const MultisymplecticLieSystem& m, const std::vector<Point>& samples,
                      const DiffBackend& b = DiffBackend::analytic(), const Tolerances& tol = {});

// Standard deviation over the samples of the function i_{Y_1 ^ ... ^ Y_k} Theta.
double noetherSpread(const FieldFamily& symmetries, const DifferentialForm& theta, const std::vector<Point>& samples);

}  // namespace mslie
