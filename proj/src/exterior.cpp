#include "mslie/exterior.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <mutex>
#include <sstream>

namespace mslie {

namespace {

struct BinomialTable {
    std::array<std::array<std::size_t, kMaxExteriorDim + 2>, kMaxExteriorDim + 2> c{};
    BinomialTable() {
        for (int n = 0; n <= kMaxExteriorDim + 1; ++n) {
            c[n][0] = 1;
            for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
        }
    }
};

const BinomialTable& binomials() {
    static const BinomialTable t;
    return t;
}

struct IndexTables {
    std::array<std::array<std::once_flag, kMaxExteriorDim + 1>, kMaxExteriorDim + 1> once;
    std::array<std::array<std::vector<MultiIndex>, kMaxExteriorDim + 1>, kMaxExteriorDim + 1> table;
};

IndexTables& indexTables() {
    static IndexTables t;
    return t;
}

void buildTable(int n, int k, std::vector<MultiIndex>& out) {
    out.assign(binomial(n, k), MultiIndex{});
    MultiIndex I(static_cast<std::size_t>(k));
    // enumerate in lex order, place by colex rank
    for (int i = 0; i < k; ++i) I[static_cast<std::size_t>(i)] = i;
    if (k == 0) {
        out[0] = I;
        return;
    }
    while (true) {
        out[rankOf(I)] = I;
        int i = k - 1;
        while (i >= 0 && I[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++I[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) I[static_cast<std::size_t>(j)] = I[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace

std::size_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (n > kMaxExteriorDim + 1) throw Error(ErrorCode::Dimension, "binomial: n too large");
    return binomials().c[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

const std::vector<MultiIndex>& multiIndices(int n, int k) {
    if (n < 0 || n > kMaxExteriorDim || k < 0 || k > n)
        throw Error(ErrorCode::Degree, "multiIndices: invalid (n,k) = (" + std::to_string(n) + "," + std::to_string(k) + ")");
    auto& t = indexTables();
    std::call_once(t.once[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)],
                   [&] { buildTable(n, k, t.table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]); });
    return t.table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

std::size_t rankOf(const MultiIndex& I) {
    std::size_t r = 0;
    for (std::size_t t = 0; t < I.size(); ++t) r += binomial(I[t], static_cast<int>(t) + 1);
    return r;
}

bool isStrictlyIncreasing(const MultiIndex& I) {
    for (std::size_t i = 0; i < I.size(); ++i) {
        if (I[i] < 0) return false;
        if (i > 0 && I[i] <= I[i - 1]) return false;
    }
    return true;
}

int shuffleSign(const MultiIndex& I, const MultiIndex& J, MultiIndex& merged) {
    merged.clear();
    merged.reserve(I.size() + J.size());
    std::size_t i = 0, j = 0;
    int inversions = 0;
    while (i < I.size() || j < J.size()) {
        if (j == J.size() || (i < I.size() && I[i] < J[j])) {
            merged.push_back(I[i++]);
        } else if (i == I.size() || J[j] < I[i]) {
            // J[j] jumps over the remaining entries of I
            inversions += static_cast<int>(I.size() - i);
            merged.push_back(J[j++]);
        } else {
            return 0;
        }
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

int contractionSign(const MultiIndex& J, const MultiIndex& I, MultiIndex& rest) {
    rest = I;
    int sign = 1;
    for (int j : J) {
        auto it = std::find(rest.begin(), rest.end(), j);
        if (it == rest.end()) return 0;
        if ((it - rest.begin()) % 2 == 1) sign = -sign;
        rest.erase(it);
    }
    return sign;
}

std::string varianceName(Variance v) { return v == Variance::Covariant ? "covariant" : "contravariant"; }

AlternatingTensor values(const JetTensor& t) {
    AlternatingTensor r(t.dim(), t.degree(), t.variance());
    for (std::size_t i = 0; i < t.size(); ++i) r[i] = t[i].value();
    return r;
}

JetTensor constantJets(const AlternatingTensor& t) {
    JetTensor r(t.dim(), t.degree(), t.variance());
    for (std::size_t i = 0; i < t.size(); ++i) r[i] = Jet(t[i]);
    return r;
}

double maxAbs(const AlternatingTensor& t) {
    double m = 0.0;
    for (double c : t.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

std::string toString(const AlternatingTensor& t, double drop) {
    const auto& idx = multiIndices(t.dim(), t.degree());
    const char* sym = t.variance() == Variance::Covariant ? "dx" : "d";
    std::ostringstream os;
    bool first = true;
    for (std::size_t r = 0; r < t.size(); ++r) {
        if (std::abs(t[r]) <= drop) continue;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", t[r]);
        if (!first) os << " + ";
        os << buf;
        for (std::size_t i = 0; i < idx[r].size(); ++i) os << (i == 0 ? " " : "^") << sym << idx[r][i] + 1;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

Eigen::MatrixXd contractionMatrix(const AlternatingTensor& w, int ell) {
    if (w.variance() != Variance::Contravariant) throw Error(ErrorCode::Variance, "contractionMatrix: w must be a multivector");
    if (ell < w.degree() || ell > w.dim())
        throw Error(ErrorCode::Degree, "contractionMatrix: form degree " + std::to_string(ell) + " below multivector degree " +
                                           std::to_string(w.degree()));
    const int n = w.dim();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(binomial(n, ell - w.degree())),
                                              static_cast<Eigen::Index>(binomial(n, ell)));
    const auto& Iw = multiIndices(n, w.degree());
    const auto& Ia = multiIndices(n, ell);
    MultiIndex rest;
    for (std::size_t col = 0; col < Ia.size(); ++col)
        for (std::size_t j = 0; j < Iw.size(); ++j) {
            if (w[j] == 0.0) continue;
            const int s = contractionSign(Iw[j], Ia[col], rest);
            if (s != 0) m(static_cast<Eigen::Index>(rankOf(rest)), static_cast<Eigen::Index>(col)) += s * w[j];
        }
    return m;
}

Eigen::MatrixXd interiorMapMatrix(const AlternatingTensor& a, int p) {
    if (a.variance() != Variance::Covariant) throw Error(ErrorCode::Variance, "interiorMapMatrix: a must be a form");
    if (p < 0 || p > a.degree()) throw Error(ErrorCode::Degree, "interiorMapMatrix: p exceeds form degree");
    const int n = a.dim();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(binomial(n, a.degree() - p)),
                                              static_cast<Eigen::Index>(binomial(n, p)));
    const auto& Iw = multiIndices(n, p);
    const auto& Ia = multiIndices(n, a.degree());
    MultiIndex rest;
    for (std::size_t col = 0; col < Iw.size(); ++col)
        for (std::size_t i = 0; i < Ia.size(); ++i) {
            if (a[i] == 0.0) continue;
            const int s = contractionSign(Iw[col], Ia[i], rest);
            if (s != 0) m(static_cast<Eigen::Index>(rankOf(rest)), static_cast<Eigen::Index>(col)) += s * a[i];
        }
    return m;
}

NullSpace nullSpace(const Eigen::MatrixXd& m, double relTol) {
    NullSpace ns;
    const Eigen::Index cols = m.cols();
    if (cols == 0) {
        ns.basis = Eigen::MatrixXd(0, 0);
        return ns;
    }
    if (m.rows() == 0) {
        ns.basis = Eigen::MatrixXd::Identity(cols, cols);
        return ns;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (smax > 0.0 && s(i) > relTol * smax) ++rank;
    ns.rank = rank;
    ns.smallestRelativeSingularValue = (smax > 0.0 && s.size() == cols) ? s(s.size() - 1) / smax : 0.0;
    ns.basis = svd.matrixV().rightCols(cols - rank);
    return ns;
}

std::vector<AlternatingTensor> annihilator(const AlternatingTensor& w, int ell) {
    const NullSpace ns = nullSpace(contractionMatrix(w, ell));
    std::vector<AlternatingTensor> out;
    for (Eigen::Index c = 0; c < ns.basis.cols(); ++c) {
        AlternatingTensor t(w.dim(), ell, Variance::Covariant);
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = ns.basis(static_cast<Eigen::Index>(i), c);
        out.push_back(std::move(t));
    }
    return out;
}

int nondegeneracyOrder(const AlternatingTensor& a, int maxS) {
    if (a.variance() != Variance::Covariant) throw Error(ErrorCode::Variance, "nondegeneracyOrder: needs a form");
    // p = k would contract to a scalar, so orders run up to k-1
    const int limit = std::min(maxS, a.degree() - 1);
    int s = 0;
    for (int p = 1; p <= limit; ++p) {
        const Eigen::MatrixXd m = interiorMapMatrix(a, p);
        if (nullSpace(m).rank < m.cols()) break;
        s = p;
    }
    return s;
}

AlternatingTensor pullbackAt(const AlternatingTensor& a, const Eigen::MatrixXd& J) {
    if (a.variance() != Variance::Covariant) throw Error(ErrorCode::Variance, "pullbackAt: needs a form");
    if (J.rows() != a.dim()) throw Error(ErrorCode::Dimension, "pullbackAt: Jacobian rows must match form dimension");
    const int m = static_cast<int>(J.cols());
    std::vector<AlternatingTensor> rows;
    for (Eigen::Index r = 0; r < J.rows(); ++r) {
        std::vector<double> c(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) c[static_cast<std::size_t>(j)] = J(r, j);
        rows.push_back(AlternatingTensor::fromComponents(c, Variance::Covariant));
    }
    AlternatingTensor out(m, a.degree(), Variance::Covariant);
    if (a.degree() > m) throw Error(ErrorCode::Degree, "pullbackAt: form degree exceeds source dimension");
    const auto& idx = multiIndices(a.dim(), a.degree());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (a[i] == 0.0) continue;
        AlternatingTensor term = AlternatingTensor::unit(m, Variance::Covariant);
        for (int k : idx[i]) term = wedge(term, rows[static_cast<std::size_t>(k)]);
        out += a[i] * term;
    }
    return out;
}

AlternatingTensor pushforwardAt(const AlternatingTensor& w, const Eigen::MatrixXd& J) {
    if (w.variance() != Variance::Contravariant) throw Error(ErrorCode::Variance, "pushforwardAt: needs a multivector");
    if (J.cols() != w.dim()) throw Error(ErrorCode::Dimension, "pushforwardAt: Jacobian columns must match dimension");
    const int m = static_cast<int>(J.rows());
    if (w.degree() > m) throw Error(ErrorCode::Degree, "pushforwardAt: degree exceeds target dimension");
    std::vector<AlternatingTensor> cols;
    for (Eigen::Index c = 0; c < J.cols(); ++c) {
        std::vector<double> v(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = J(i, c);
        cols.push_back(AlternatingTensor::fromComponents(v, Variance::Contravariant));
    }
    AlternatingTensor out(m, w.degree(), Variance::Contravariant);
    const auto& idx = multiIndices(w.dim(), w.degree());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (w[i] == 0.0) continue;
        AlternatingTensor term = AlternatingTensor::unit(m, Variance::Contravariant);
        for (int k : idx[i]) term = wedge(term, cols[static_cast<std::size_t>(k)]);
        out += w[i] * term;
    }
    return out;
}

}  // namespace mslie
