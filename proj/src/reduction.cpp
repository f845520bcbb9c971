#include "mslie/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "mslie/integrate.hpp"

namespace mslie {

namespace {

// Points on the fiber through section(y), shifted along each fiber field.
std::vector<Point> fiberShifts(const QuotientChart& q, const Point& y) {
    const Point x0 = q.section(y);
    std::vector<Point> out;
    for (const auto& F : q.fiberFlows)
        for (double s : {-kFiberShift, kFiberShift}) out.push_back(flow(F, x0, s));
    return out;
}

// Right inverse of a full-row-rank Jacobian.
Eigen::MatrixXd rightInverse(const Eigen::MatrixXd& J) {
    return J.transpose() * (J * J.transpose()).ldlt().solve(Eigen::MatrixXd::Identity(J.rows(), J.rows()));
}

}  // namespace

Report verifyQuotient(const QuotientChart& q, const std::vector<Point>& baseSamples, const std::vector<Point>& totalSamples,
                      const DiffBackend& b, double tol) {
    Report rep;
    if (q.section.source() != q.base() || q.section.target() != q.total())
        throw Error(ErrorCode::Chart, "quotient " + q.name + ": section does not map base to total");
    double sec = 0.0;
    for (const auto& y : baseSamples) sec = std::max(sec, (q.projection(q.section(y)) - y).cwiseAbs().maxCoeff());
    rep.add("projection_section_identity", sec, tol);
    double fib = 0.0;
    for (const auto& x : totalSamples)
        for (const auto& F : q.fiberFlows) fib = std::max(fib, (q.projection.jacobian(x, b) * F(x)).cwiseAbs().maxCoeff());
    rep.add("fiber_in_kernel", fib, tol);
    const int fiberDim = q.total()->dim() - q.base()->dim();
    rep.addFlag("fiber_count", static_cast<int>(q.fiberFlows.size()) == fiberDim,
                std::to_string(q.fiberFlows.size()) + " fiber fields for fiber dimension " + std::to_string(fiberDim));
    return rep;
}

AlternatingTensor momentumMap(const Point& x, const MultiVectorField& w, const DifferentialForm& theta) {
    if (w.degree() > theta.degree())
        throw Error(ErrorCode::Degree, "momentum map: multivector degree exceeds form degree");
    return interior(w(x), theta(x));
}

Report verifyReductionScheme(const ReductionScheme& s, const std::vector<Point>& samples, const DiffBackend& b,
                             const Tolerances& tol) {
    Report rep;
    const double t = tol.forBackend(b);
    const FieldFamily& f = s.symmetryFamily;

    try {
        const auto sc = structureConstants(f, samples, b);
        const auto u = isUnimodular(sc);
        std::string tr;
        for (double x : u.traces) tr += (tr.empty() ? "" : ", ") + std::to_string(x);
        rep.addFlag("unimodular", u.unimodular, "traces " + tr);
    } catch (const Error& e) {
        rep.addFlag("unimodular", false, e.what());
    }

    double span = 0.0;
    if (s.w.decomposition()) {
        for (const auto& x : samples) {
            const Eigen::MatrixXd M = f.componentMatrix(x);
            const auto qr = M.colPivHouseholderQr();
            for (const auto& Z : *s.w.decomposition()) {
                const Point z = Z(x);
                span = std::max(span, (M * qr.solve(z) - z).cwiseAbs().maxCoeff());
            }
        }
    } else if (s.w.degree() == f.size()) {
        for (const auto& x : samples) {
            std::vector<AlternatingTensor> fs;
            for (const auto& X : f.fields) fs.push_back(AlternatingTensor::fromComponents(toStd(X(x)), Variance::Contravariant));
            const auto W0 = wedgeAll(fs, f.dim(), Variance::Contravariant);
            const auto wx = s.w(x);
            const Eigen::Map<const Eigen::VectorXd> a(W0.coeffs().data(), static_cast<Eigen::Index>(W0.coeffs().size()));
            const Eigen::Map<const Eigen::VectorXd> c(wx.coeffs().data(), static_cast<Eigen::Index>(wx.coeffs().size()));
            const double lam = a.squaredNorm() > 0.0 ? a.dot(c) / a.squaredNorm() : 0.0;
            span = std::max(span, (c - lam * a).cwiseAbs().maxCoeff());
        }
    } else {
        span = std::numeric_limits<double>::infinity();
    }
    rep.add("w_in_symmetry_span", span, 1e-9);

    const DifferentialForm J = s.noetherForm();
    double a = 0.0, inv = 0.0;
    for (const auto& X : f.fields) {
        a = std::max(a, maxAbsOver(contractField(X, J), samples));
        inv = std::max(inv, maxAbsOver(lieDerivativeForm(X, J, b), samples));
    }
    rep.add("(a) horizontal", a, t);
    rep.add("(b) invariant", inv, t);
    rep.add("(c) closed", J.degree() < J.dim() ? maxAbsOver(exteriorDerivative(J, b), samples) : 0.0, t);

    const auto& q = s.quotient;
    int degenerate = 0;
    int thetaOrder = s.theta.degree();
    for (const auto& x : samples) {
        const Point y = q.projection(x);
        const auto red = pullbackAt(J(q.section(y)), q.section.jacobian(y, b));
        if (nondegeneracyOrder(red, 1) < 1) ++degenerate;
        thetaOrder = std::min(thetaOrder, nondegeneracyOrder(s.theta(x), s.theta.degree()));
    }
    rep.add("(d) reduced nondegenerate", degenerate, 0.0,
            "theta is " + std::to_string(thetaOrder) + "-nondegenerate; scheme degree " + std::to_string(s.w.degree()));
    return rep;
}

ReducedForm reduceForm(const ReductionScheme& s, const std::vector<Point>& baseSamples, const DiffBackend& b, double tol) {
    const auto& q = s.quotient;
    const DifferentialForm J = s.noetherForm();
    ReducedForm out;
    out.form = pullback(q.section, J, b).renamed("reduced(" + s.name + ")");
    for (const auto& y : baseSamples) {
        const AlternatingTensor ref = out.form(y);
        for (const auto& x1 : fiberShifts(q, y)) {
            const Eigen::MatrixXd D = q.projection.jacobian(x1, b);
            const AlternatingTensor alt = pullbackAt(J(x1), rightInverse(D));
            const double drift = (q.projection(x1) - y).cwiseAbs().maxCoeff();
            out.fiberResidual = std::max({out.fiberResidual, maxAbs(alt - ref), drift});
        }
    }
    if (out.fiberResidual > tol)
        throw Error(ErrorCode::NotBasic, "i_w Theta for scheme " + s.name + " is not basic (fiber residual " +
                                             std::to_string(out.fiberResidual) + ")");
    return out;
}

ProjectedField projectField(const VectorField& X, const QuotientChart& q, const std::vector<Point>& baseSamples,
                            const DiffBackend& b, double tol) {
    ProjectedField out;
    out.field = pushforwardField(q.projection, q.section, X, b).renamed(X.name() + "~");
    for (const auto& y : baseSamples) {
        const Point ref = out.field(y);
        for (const auto& x1 : fiberShifts(q, y))
            out.wellDefResidual = std::max(out.wellDefResidual, (q.projection.jacobian(x1, b) * X(x1) - ref).cwiseAbs().maxCoeff());
    }
    if (out.wellDefResidual > tol)
        throw Error(ErrorCode::NotProjectable, X.name() + " is not projectable along " + q.name + " (residual " +
                                                   std::to_string(out.wellDefResidual) + ")");
    return out;
}

ReducedSystem reduceSystem(const MultisymplecticLieSystem& m, const ReductionScheme& s, const std::vector<Point>& totalSamples,
                           const std::vector<Point>& baseSamples, const DiffBackend& b) {
    for (const auto& Y : s.symmetryFamily.fields) {
        const double r = lieSymmetryResidual(Y, m.basis(), totalSamples, b);
        if (r > kSymmetryTolerance)
            throw Error(ErrorCode::NotProjectable, Y.name() + " is not a symmetry of " + m.name + " (residual " + std::to_string(r) + ")");
    }
    ReducedSystem out;
    std::vector<VectorField> fields;
    for (int i = 0; i < m.basis().size(); ++i) {
        const auto p = projectField(m.basis().fields[static_cast<std::size_t>(i)], s.quotient, baseSamples, b);
        out.projectionResidual = std::max(out.projectionResidual, p.wellDefResidual);
        if (maxAbsOver(p.field, baseSamples) < 1e-12) continue;
        fields.push_back(p.field);
        out.kept.push_back(i);
    }
    if (fields.empty()) throw Error(ErrorCode::NotProjectable, "every field of " + m.name + " projects to zero");
    const auto rf = reduceForm(s, baseSamples, b);
    out.fiberResidual = rf.fiberResidual;
    out.system.name = m.name + "/" + s.name;
    out.system.system = LieSystem{FieldFamily(out.system.name, std::move(fields)), m.system.coefficients.select(out.kept)};
    out.system.theta = rf.form;
    return out;
}

std::vector<Equilibrium> relativeEquilibria(const VectorField& X, const std::vector<Point>& guesses, const DiffBackend& b) {
    std::vector<Equilibrium> out;
    for (const auto& g : guesses) {
        Equilibrium e;
        e.guess = g;
        Point y = g;
        try {
            for (e.iterations = 0; e.iterations < 50; ++e.iterations) {
                const Point v = X(y);
                e.residual = v.cwiseAbs().maxCoeff();
                if (e.residual < 1e-12) {
                    e.converged = true;
                    break;
                }
                y -= X.jacobian(y, b).fullPivLu().solve(v);
                if (!y.allFinite()) break;
            }
            if (!e.converged && y.allFinite()) {
                e.residual = X(y).cwiseAbs().maxCoeff();
                e.converged = e.residual < 1e-12;
            }
        } catch (const Error&) {
            e.converged = false;
        }
        e.point = y;
        if (e.converged) {
            const Eigen::EigenSolver<Eigen::MatrixXd> es(X.jacobian(y, b));
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) e.eigenvalues.push_back(es.eigenvalues()(i));
            std::sort(e.eigenvalues.begin(), e.eigenvalues.end(),
                      [](auto a, auto c) { return a.real() != c.real() ? a.real() < c.real() : a.imag() < c.imag(); });
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace mslie
