#include "mslie/reconstruction.hpp"

#include <algorithm>

namespace mslie {

namespace {

Eigen::MatrixXd stack(const std::vector<Eigen::MatrixXd>& blocks, Eigen::Index cols) {
    Eigen::Index rows = 0;
    for (const auto& m : blocks) rows += m.rows();
    Eigen::MatrixXd out(rows, cols);
    Eigen::Index r = 0;
    for (const auto& m : blocks) {
        out.middleRows(r, m.rows()) = m;
        r += m.rows();
    }
    return out;
}

}  // namespace

int kernelIntersectionDim(const std::vector<QuotientChart>& projections, const Point& g, const DiffBackend& b) {
    if (projections.empty()) throw Error(ErrorCode::InvalidArgument, "no projections given");
    const auto& total = projections.front().total();
    std::vector<Eigen::MatrixXd> blocks;
    for (const auto& q : projections) {
        if (q.total() != total) throw Error(ErrorCode::Chart, "projections start from different charts");
        blocks.push_back(q.projection.jacobian(g, b));
    }
    const Eigen::MatrixXd A = stack(blocks, total->dim());
    return total->dim() - nullSpace(A).rank;
}

FieldReconstruction reconstructField(const std::vector<VectorField>& projected, const std::vector<QuotientChart>& projections,
                                     const Point& g, const DiffBackend& b) {
    if (projected.size() != projections.size()) throw Error(ErrorCode::Dimension, "one reduced field per projection expected");
    if (const int k = kernelIntersectionDim(projections, g, b); k != 0)
        throw Error(ErrorCode::Underdetermined, "kernel intersection has dimension " + std::to_string(k));
    std::vector<Eigen::MatrixXd> blocks;
    std::vector<Eigen::MatrixXd> rhs;
    for (std::size_t i = 0; i < projections.size(); ++i) {
        const auto& q = projections[i];
        if (projected[i].chart() != q.base()) throw Error(ErrorCode::Chart, "reduced field " + projected[i].name() + " is not on the base");
        blocks.push_back(q.projection.jacobian(g, b));
        rhs.push_back(projected[i](q.projection(g)));
    }
    const Eigen::MatrixXd A = stack(blocks, g.size());
    const Eigen::VectorXd y = stack(rhs, 1);
    FieldReconstruction out;
    out.value = A.colPivHouseholderQr().solve(y);
    out.residual = (A * out.value - y).cwiseAbs().maxCoeff();
    if (out.residual > kIncompatibleTolerance)
        throw Error(ErrorCode::Incompatible, "reductions incompatible (residual " + std::to_string(out.residual) + ")");
    return out;
}

FieldReconstruction reconstructField(const std::vector<LieSystem>& projected, const std::vector<QuotientChart>& projections,
                                     const Point& g, double t, const DiffBackend& b) {
    std::vector<VectorField> fields;
    for (const auto& s : projected) fields.push_back(s.at(t));
    return reconstructField(fields, projections, g, b);
}

AnnihilatorIntersection annihilatorIntersectionDim(const std::vector<MultiVectorField>& multivectors, int ell, const Point& g) {
    if (multivectors.empty()) throw Error(ErrorCode::InvalidArgument, "no multivectors given");
    const int n = multivectors.front().dim();
    AnnihilatorIntersection out;
    std::vector<Eigen::MatrixXd> blocks;
    for (const auto& Z : multivectors) {
        if (Z.chart() != multivectors.front().chart()) throw Error(ErrorCode::Chart, "multivectors live on different charts");
        if (ell < Z.degree())
            throw Error(ErrorCode::Degree, "annihilator of degree " + std::to_string(ell) + " for a " + std::to_string(Z.degree()) + "-vector");
        if (Z.degree() != multivectors.front().degree()) out.mixedDegrees = true;
        blocks.push_back(contractionMatrix(Z(g), ell));
    }
    out.dim = static_cast<int>(binomial(n, ell)) - nullSpace(stack(blocks, static_cast<Eigen::Index>(binomial(n, ell)))).rank;
    return out;
}

FormReconstruction reconstructForm(const std::vector<ReducedInvariant>& invariants, int ell, const Point& g, const DiffBackend& b) {
    if (invariants.empty()) throw Error(ErrorCode::InvalidArgument, "no reduced invariants given");
    const int n = static_cast<int>(g.size());
    const auto cols = static_cast<Eigen::Index>(binomial(n, ell));
    FormReconstruction out;
    std::vector<Eigen::MatrixXd> blocks, rhs;
    for (const auto& inv : invariants) {
        const auto& q = inv.quotient;
        if (inv.Z.chart() != q.total() || inv.form.chart() != q.base())
            throw Error(ErrorCode::Chart, "reduced invariant does not match its quotient");
        if (inv.form.degree() != ell - inv.Z.degree()) throw Error(ErrorCode::Degree, "reduced form has the wrong degree");
        if (inv.Z.degree() != invariants.front().Z.degree()) out.mixedDegrees = true;
        blocks.push_back(contractionMatrix(inv.Z(g), ell));
        const auto pulled = pullbackAt(inv.form(q.projection(g)), q.projection.jacobian(g, b));
        rhs.push_back(Eigen::Map<const Eigen::VectorXd>(pulled.coeffs().data(), static_cast<Eigen::Index>(pulled.coeffs().size())));
    }
    const Eigen::MatrixXd A = stack(blocks, cols);
    const Eigen::VectorXd y = stack(rhs, 1);
    if (nullSpace(A).rank < cols)
        throw Error(ErrorCode::Insufficient, "insufficient reductions: the annihilators intersect in dimension " +
                                                 std::to_string(cols - nullSpace(A).rank));
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    out.residual = (A * c - y).cwiseAbs().maxCoeff();
    if (out.residual > kIncompatibleTolerance)
        throw Error(ErrorCode::Incompatible, "reductions incompatible (residual " + std::to_string(out.residual) + ")");
    out.value = AlternatingTensor(n, ell, Variance::Covariant, std::vector<double>(c.data(), c.data() + c.size()));
    return out;
}

}  // namespace mslie
