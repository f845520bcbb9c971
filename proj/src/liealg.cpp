#include "mslie/liealg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mslie {

namespace {

std::string pointString(const Point& x) {
    std::ostringstream os;
    os << "(";
    for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
    os << ")";
    return os.str();
}

// Row-major n x n jet matrix; Gauss-Jordan with pivots chosen by value.
struct JetMatrix {
    int n;
    std::vector<Jet> a;
    Jet& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
};

JetMatrix frameJets(const FieldFamily& f, const Point& x, int order, const DiffBackend& b) {
    const int n = f.dim();
    JetMatrix m{n, std::vector<Jet>(static_cast<std::size_t>(n * n))};
    for (int col = 0; col < n; ++col) {
        const JetVector v = f.fields[static_cast<std::size_t>(col)].jets(x, order, b);
        for (int row = 0; row < n; ++row) m(row, col) = v[static_cast<std::size_t>(row)];
    }
    return m;
}

Jet jetDeterminant(JetMatrix m) {
    const int n = m.n;
    Jet det(1.0);
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(m(i, k).value()) > std::abs(m(p, k).value())) p = i;
        if (m(p, k).value() == 0.0) return Jet(0.0);
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
            det = -det;
        }
        det *= m(k, k);
        for (int i = k + 1; i < n; ++i) {
            const Jet factor = m(i, k) / m(k, k);
            for (int j = k; j < n; ++j) m(i, j) -= factor * m(k, j);
        }
    }
    return det;
}

// Inverse rows of the frame matrix; row a is the covector eta_a.
JetMatrix jetInverse(JetMatrix m) {
    const int n = m.n;
    JetMatrix inv{n, std::vector<Jet>(static_cast<std::size_t>(n * n), Jet(0.0))};
    for (int i = 0; i < n; ++i) inv(i, i) = Jet(1.0);
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(m(i, k).value()) > std::abs(m(p, k).value())) p = i;
        if (m(p, k).value() == 0.0) throw Error(ErrorCode::FrameDegenerate, "frame matrix is singular");
        if (p != k)
            for (int j = 0; j < n; ++j) {
                std::swap(m(p, j), m(k, j));
                std::swap(inv(p, j), inv(k, j));
            }
        const Jet pivot = m(k, k);
        for (int j = 0; j < n; ++j) {
            m(k, j) /= pivot;
            inv(k, j) /= pivot;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            const Jet factor = m(i, k);
            for (int j = 0; j < n; ++j) {
                m(i, j) -= factor * m(k, j);
                inv(i, j) -= factor * inv(k, j);
            }
        }
    }
    return inv;
}

void requireSquare(const FieldFamily& f, const char* what) {
    if (f.size() != f.dim())
        throw Error(ErrorCode::Dimension, std::string(what) + ": needs as many fields as coordinates (r = " + std::to_string(f.size()) +
                                              ", n = " + std::to_string(f.dim()) + ")");
}

double snapHalfInteger(double v) {
    const double h = std::round(2.0 * v) / 2.0;
    return std::abs(v - h) < kHalfIntegerSnap ? h : v;
}

}  // namespace

FieldFamily::FieldFamily(std::string name_, std::vector<VectorField> fields_) : name(std::move(name_)), fields(std::move(fields_)) {
    if (fields.empty()) throw Error(ErrorCode::InvalidArgument, "field family " + name + " is empty");
    chart = fields.front().chart();
    for (const auto& X : fields)
        if (X.chart() != chart) throw Error(ErrorCode::Chart, "field family " + name + " mixes charts");
}

Eigen::MatrixXd FieldFamily::componentMatrix(const Point& x) const {
    Eigen::MatrixXd m(dim(), size());
    for (int a = 0; a < size(); ++a) m.col(a) = fields[static_cast<std::size_t>(a)](x);
    return m;
}

StructureConstants structureConstants(const FieldFamily& f, const std::vector<Point>& samples, const DiffBackend& b,
                                      double closureTol) {
    if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "structureConstants: no samples");
    const int r = f.size();
    const int n = f.dim();
    const Eigen::Index rows = static_cast<Eigen::Index>(n) * static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd A(rows, r);
    StructureConstants sc;
    sc.r = r;
    sc.c.assign(static_cast<std::size_t>(r * r * r), 0.0);
    sc.raw = sc.c;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const Eigen::MatrixXd M = f.componentMatrix(samples[s]);
        A.middleRows(static_cast<Eigen::Index>(s) * n, n) = M;
        if (r <= n && nullSpace(M).rank < r) sc.pointwiseIndependent = false;
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < r)
        throw Error(ErrorCode::NotClosed, "family " + f.name + " is linearly dependent over the reals on the samples");

    double worst = 0.0;
    std::string worstPair;
    for (int a = 0; a < r; ++a)
        for (int bb = a + 1; bb < r; ++bb) {
            const VectorField br = lieBracket(f.fields[static_cast<std::size_t>(a)], f.fields[static_cast<std::size_t>(bb)], b);
            Eigen::VectorXd rhs(rows);
            for (std::size_t s = 0; s < samples.size(); ++s) rhs.segment(static_cast<Eigen::Index>(s) * n, n) = br(samples[s]);
            const Eigen::VectorXd c = qr.solve(rhs);
            const double res = (A * c - rhs).cwiseAbs().maxCoeff();
            if (res > worst) {
                worst = res;
                worstPair = "[" + f.fields[static_cast<std::size_t>(a)].name() + "," + f.fields[static_cast<std::size_t>(bb)].name() + "]";
            }
            for (int g = 0; g < r; ++g) {
                sc.raw[sc.index(a, bb, g)] = c(g);
                sc.raw[sc.index(bb, a, g)] = -c(g);
                sc.c[sc.index(a, bb, g)] = snapHalfInteger(c(g));
                sc.c[sc.index(bb, a, g)] = -snapHalfInteger(c(g));
            }
        }
    sc.residual = worst;
    if (worst > closureTol)
        throw Error(ErrorCode::NotClosed, "family " + f.name + " is not closed under the bracket: " + worstPair +
                                              " leaves residual " + std::to_string(worst));

    double jac = 0.0;
    for (int a = 0; a < r; ++a)
        for (int bb = 0; bb < r; ++bb)
            for (int g = 0; g < r; ++g)
                for (int e = 0; e < r; ++e) {
                    double s = 0.0;
                    for (int d = 0; d < r; ++d)
                        s += sc.rawAt(a, bb, d) * sc.rawAt(d, g, e) + sc.rawAt(bb, g, d) * sc.rawAt(d, a, e) +
                             sc.rawAt(g, a, d) * sc.rawAt(d, bb, e);
                    jac = std::max(jac, std::abs(s));
                }
    sc.jacobiResidual = jac;
    return sc;
}

double maxDifference(const StructureConstants& a, const StructureConstants& b, double scale) {
    if (a.r != b.r) throw Error(ErrorCode::Dimension, "structure constant tables of different size");
    double m = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) m = std::max(m, std::abs(a.raw[i] - scale * b.raw[i]));
    return m;
}

StructureConstants structureConstantsFromTable(int r, const std::vector<BracketEntry>& entries) {
    StructureConstants sc;
    sc.r = r;
    sc.c.assign(static_cast<std::size_t>(r * r * r), 0.0);
    for (const auto& e : entries) {
        sc.c[sc.index(e.a, e.b, e.g)] = e.value;
        sc.c[sc.index(e.b, e.a, e.g)] = -e.value;
    }
    sc.raw = sc.c;
    return sc;
}

Unimodularity isUnimodular(const StructureConstants& sc, double tol) {
    Unimodularity u;
    u.unimodular = true;
    for (int a = 0; a < sc.r; ++a) {
        double t = 0.0;
        for (int bb = 0; bb < sc.r; ++bb) t += sc.rawAt(a, bb, bb);
        u.traces.push_back(t);
        if (std::abs(t) >= tol) u.unimodular = false;
    }
    return u;
}

LocalAutomorphism isLocallyAutomorphic(const FieldFamily& f, const std::vector<Point>& samples, double tol) {
    LocalAutomorphism out;
    if (f.size() != f.dim()) return out;
    double m = INFINITY;
    for (const auto& x : samples) m = std::min(m, std::abs(f.componentMatrix(x).determinant()));
    out.minAbsDet = samples.empty() ? 0.0 : m;
    out.locallyAutomorphic = !samples.empty() && m > tol;
    return out;
}

std::vector<AlternatingTensor> dualCoframe(const FieldFamily& f, const Point& x) {
    requireSquare(f, "dualCoframe");
    const Eigen::MatrixXd M = f.componentMatrix(x);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    if (std::abs(lu.determinant()) <= 1e-9) throw Error(ErrorCode::FrameDegenerate, "frame degenerate at x = " + pointString(x));
    const Eigen::MatrixXd inv = lu.inverse();
    std::vector<AlternatingTensor> out;
    for (int a = 0; a < f.size(); ++a) {
        std::vector<double> row(static_cast<std::size_t>(f.dim()));
        for (int i = 0; i < f.dim(); ++i) row[static_cast<std::size_t>(i)] = inv(a, i);
        out.push_back(AlternatingTensor::fromComponents(row, Variance::Covariant));
    }
    return out;
}

std::vector<DifferentialForm> dualCoframeForms(const FieldFamily& f) {
    requireSquare(f, "dualCoframeForms");
    const int n = f.dim();
    std::vector<DifferentialForm> out;
    for (int a = 0; a < n; ++a)
        out.emplace_back(f.chart, 1, "eta" + std::to_string(a + 1), [f, a, n](const Point& x, int order, const DiffBackend& b) {
            JetMatrix m = frameJets(f, x, order, b);
            if (std::abs(jetDeterminant(m).value()) <= 1e-9)
                throw Error(ErrorCode::FrameDegenerate, "frame degenerate at x = " + pointString(x));
            const JetMatrix inv = jetInverse(std::move(m));
            JetVector row;
            for (int i = 0; i < n; ++i) row.push_back(inv.a[static_cast<std::size_t>(a * n + i)]);
            return row;
        });
    return out;
}

DifferentialForm invariantVolume(const FieldFamily& f) {
    requireSquare(f, "invariantVolume");
    return DifferentialForm(f.chart, f.dim(), "Theta_" + f.name, [f](const Point& x, int order, const DiffBackend& b) {
        const Jet det = jetDeterminant(frameJets(f, x, order, b));
        if (std::abs(det.value()) <= 1e-9) throw Error(ErrorCode::FrameDegenerate, "frame degenerate at x = " + pointString(x));
        return JetVector{1.0 / det};
    });
}

double adjointTraceIdentity(const FieldFamily& f, const StructureConstants& sc, const std::vector<Point>& samples,
                            const DiffBackend& b) {
    const DifferentialForm theta = invariantVolume(f);
    const auto traces = isUnimodular(sc).traces;
    double worst = 0.0;
    for (int a = 0; a < f.size(); ++a) {
        const DifferentialForm L = lieDerivativeForm(f.fields[static_cast<std::size_t>(a)], theta, b);
        for (const auto& x : samples) worst = std::max(worst, maxAbs(L(x) + traces[static_cast<std::size_t>(a)] * theta(x)));
    }
    return worst;
}

double lieSymmetryResidual(const VectorField& Y, const FieldFamily& f, const std::vector<Point>& samples, const DiffBackend& b) {
    double worst = 0.0;
    for (const auto& X : f.fields) worst = std::max(worst, maxAbsOver(lieBracket(X, Y, b), samples));
    return worst;
}

Eigen::Matrix2d CasimirTensor::at(const Point& x) const {
    const Eigen::Vector2d X1 = f_.fields[0](x), X2 = f_.fields[1](x), X3 = f_.fields[2](x);
    return X1 * X3.transpose() + X3 * X1.transpose() - 2.0 * X2 * X2.transpose();
}

CasimirTensor casimirTensor(const FieldFamily& f, const std::vector<Point>& samples, const DiffBackend& b) {
    if (f.size() != 3 || f.dim() != 2) throw Error(ErrorCode::Dimension, "casimirTensor: needs three fields on a plane");
    const StructureConstants sc = structureConstants(f, samples, b);
    const StructureConstants expected = structureConstantsFromTable(3, {{0, 1, 0, 1.0}, {0, 2, 1, 2.0}, {1, 2, 2, 1.0}});
    const char* names[3][3] = {{"", "[X1,X2]", "[X1,X3]"}, {"", "", "[X2,X3]"}, {"", "", ""}};
    for (int a = 0; a < 3; ++a)
        for (int bb = a + 1; bb < 3; ++bb)
            for (int g = 0; g < 3; ++g)
                if (std::abs(sc.rawAt(a, bb, g) - expected(a, bb, g)) > 1e-9)
                    throw Error(ErrorCode::NotClosed, std::string("casimirTensor: ") + names[a][bb] + " does not follow the sl2 pattern");
    return CasimirTensor(f);
}

Point LieSystem::velocity(double t, const Point& x) const { return velocity(t, x, coefficients); }

Point LieSystem::velocity(double t, const Point& x, const TimeCoefficients& b) const {
    if (static_cast<int>(b.size()) != basis.size())
        throw Error(ErrorCode::Dimension, "coefficient count " + std::to_string(b.size()) + " does not match basis size " +
                                              std::to_string(basis.size()));
    Point v = Point::Zero(basis.dim());
    for (int a = 0; a < basis.size(); ++a) {
        const double c = b[static_cast<std::size_t>(a)](t);
        if (c != 0.0) v += c * basis.fields[static_cast<std::size_t>(a)](x);
    }
    return v;
}

VectorField LieSystem::at(double t) const { return at(t, coefficients); }

VectorField LieSystem::at(double t, const TimeCoefficients& b) const {
    if (static_cast<int>(b.size()) != basis.size()) throw Error(ErrorCode::Dimension, "coefficient count does not match basis size");
    const Eigen::VectorXd c = b.at(t);
    return linearCombination(basis.fields, std::vector<double>(c.data(), c.data() + c.size()));
}

}  // namespace mslie
