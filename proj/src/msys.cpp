#include "mslie/msys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mslie {

double locallyHamiltonianResidual(const VectorField& X, const DifferentialForm& theta, const std::vector<Point>& samples,
                                  const DiffBackend& b) {
    return maxAbsOver(lieDerivativeForm(X, theta, b), samples);
}

double verifyHamiltonianForm(const HamiltonianPair& p, const DifferentialForm& theta, const std::vector<Point>& samples,
                             const DiffBackend& b) {
    if (p.hamForm.degree() + 2 != theta.degree())
        throw Error(ErrorCode::Degree, "Hamiltonian form of degree " + std::to_string(p.hamForm.degree()) + " for a " +
                                           std::to_string(theta.degree()) + "-form");
    return maxAbsDifference(exteriorDerivative(p.hamForm, b), contractField(p.field, theta), samples);
}

DifferentialForm bracketHamiltonianForms(const HamiltonianPair& pX, const HamiltonianPair& pY, const DifferentialForm& theta) {
    return contractField(MultiVectorField::wedgeOf({pX.field, pY.field}), theta);
}

DifferentialForm bracketHamiltonianK1Forms(const DifferentialForm& xi, const VectorField& X, const DifferentialForm& zeta,
                                           const VectorField& Y, const DifferentialForm& theta, const std::vector<Point>& samples,
                                           const DiffBackend& b, double tol) {
    if (const double r = maxAbsDifference(xi, contractField(X, theta), samples); r > tol)
        throw Error(ErrorCode::NotHamiltonian, xi.name() + " is not i_" + X.name() + " Theta (residual " + std::to_string(r) + ")");
    if (const double r = maxAbsDifference(zeta, contractField(Y, theta), samples); r > tol)
        throw Error(ErrorCode::NotHamiltonian, zeta.name() + " is not i_" + Y.name() + " Theta (residual " + std::to_string(r) + ")");
    return contractField(lieBracket(Y, X, b), theta);
}

Report validateSystem(const MultisymplecticLieSystem& m, const std::vector<Point>& samples, const DiffBackend& b,
                      const Tolerances& tol) {
    Report rep;
    const double t = tol.forBackend(b);
    const FieldFamily& f = m.basis();

    rep.addFlag("coefficients", m.system.coefficients.size() == static_cast<std::size_t>(f.size()),
                std::to_string(m.system.coefficients.size()) + " coefficients for " + std::to_string(f.size()) + " fields");

    try {
        const auto sc = structureConstants(f, samples, b, std::numeric_limits<double>::infinity());
        rep.add("closure", sc.residual, t);
        rep.add("jacobi", sc.jacobiResidual, 1e-8);
        if (!sc.pointwiseIndependent) rep.addFlag("pointwise_independent", true, "fields are pointwise dependent somewhere; closure fit flagged");
    } catch (const Error& e) {
        rep.addFlag("closure", false, e.what());
    }

    if (m.theta.degree() < m.theta.dim()) {
        rep.add("d_theta", maxAbsOver(exteriorDerivative(m.theta, b), samples), t);
    } else {
        rep.add("d_theta", 0.0, t, "top degree");
    }

    int degenerate = 0;
    for (const auto& x : samples)
        if (nondegeneracyOrder(m.theta(x), 1) < 1) ++degenerate;
    rep.add("nondegenerate", degenerate, 0.0, std::to_string(degenerate) + " degenerate samples");

    for (const auto& X : f.fields) rep.add("hamiltonian:" + X.name(), locallyHamiltonianResidual(X, m.theta, samples, b), t);
    return rep;
}

double noetherSpread(const FieldFamily& symmetries, const DifferentialForm& theta, const std::vector<Point>& samples) {
    if (symmetries.size() != theta.degree())
        throw Error(ErrorCode::Degree, "need as many symmetries as the degree of the form");
    if (samples.empty()) return 0.0;
    const auto g = contractField(MultiVectorField::wedgeOf(symmetries.fields), theta);
    std::vector<double> v;
    for (const auto& x : samples) v.push_back(g(x)[0]);
    double mean = 0.0;
    for (double a : v) mean += a;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double a : v) var += (a - mean) * (a - mean);
    return std::sqrt(var / static_cast<double>(v.size()));
}

}  // namespace mslie
