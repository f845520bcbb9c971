#pragma once

// Dense alternating tensors (differential forms and multivectors at a point).
// Basis k-tuples are strictly increasing, 0-based, stored in colex order so the
// rank of I is sum_t C(I_t, t+1).

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mslie/error.hpp"
#include "mslie/jet.hpp"

namespace mslie {

enum class Variance { Covariant, Contravariant };

using MultiIndex = std::vector<int>;

inline constexpr int kMaxExteriorDim = 16;

std::size_t binomial(int n, int k);
const std::vector<MultiIndex>& multiIndices(int n, int k);
std::size_t rankOf(const MultiIndex& I);
bool isStrictlyIncreasing(const MultiIndex& I);

// Sign of dx^I ^ dx^J relative to dx^merged; 0 when I and J overlap.
int shuffleSign(const MultiIndex& I, const MultiIndex& J, MultiIndex& merged);

// Sign of iota_{d_J} dx^I = iota_{d_jp} o ... o iota_{d_j1} dx^I relative to dx^rest; 0 unless J is in I.
int contractionSign(const MultiIndex& J, const MultiIndex& I, MultiIndex& rest);

std::string varianceName(Variance v);

inline bool isExactZero(double x) { return x == 0.0; }
inline bool isExactZero(const Jet&) { return false; }

template <class T>
class BasicAlternatingTensor {
public:
    BasicAlternatingTensor() = default;
    BasicAlternatingTensor(int dim, int degree, Variance variance) : dim_(dim), degree_(degree), variance_(variance) {
        if (dim < 0 || dim > kMaxExteriorDim)
            throw Error(ErrorCode::Dimension, "tensor dimension " + std::to_string(dim) + " outside [0,16]");
        if (degree < 0 || degree > dim)
            throw Error(ErrorCode::Degree, "tensor degree " + std::to_string(degree) + " outside [0," + std::to_string(dim) + "]");
        coeffs_.assign(binomial(dim, degree), T(0.0));
    }
    BasicAlternatingTensor(int dim, int degree, Variance variance, std::vector<T> coeffs)
        : BasicAlternatingTensor(dim, degree, variance) {
        if (coeffs.size() != coeffs_.size())
            throw Error(ErrorCode::Dimension, "coefficient count does not match C(n,k)");
        coeffs_ = std::move(coeffs);
    }

    static BasicAlternatingTensor basis(int dim, const MultiIndex& I, Variance variance) {
        BasicAlternatingTensor t(dim, static_cast<int>(I.size()), variance);
        t.set(I, T(1.0));
        return t;
    }
    // A 1-vector or 1-form from its components.
    static BasicAlternatingTensor fromComponents(const std::vector<T>& c, Variance variance) {
        return BasicAlternatingTensor(static_cast<int>(c.size()), 1, variance, c);
    }
    // The scalar 1 seen as a degree-0 tensor.
    static BasicAlternatingTensor unit(int dim, Variance variance) {
        BasicAlternatingTensor t(dim, 0, variance);
        t.coeffs_[0] = T(1.0);
        return t;
    }

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    Variance variance() const { return variance_; }
    std::size_t size() const { return coeffs_.size(); }
    const std::vector<T>& coeffs() const { return coeffs_; }
    std::vector<T>& coeffs() { return coeffs_; }
    T& operator[](std::size_t r) { return coeffs_[r]; }
    const T& operator[](std::size_t r) const { return coeffs_[r]; }

    T get(const MultiIndex& I) const {
        checkIndex(I);
        return coeffs_[rankOf(I)];
    }
    void set(const MultiIndex& I, T value) {
        checkIndex(I);
        coeffs_[rankOf(I)] = value;
    }

    BasicAlternatingTensor& operator+=(const BasicAlternatingTensor& b) {
        checkSame(b);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += b.coeffs_[i];
        return *this;
    }
    BasicAlternatingTensor& operator-=(const BasicAlternatingTensor& b) {
        checkSame(b);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= b.coeffs_[i];
        return *this;
    }
    BasicAlternatingTensor& operator*=(const T& c) {
        for (auto& x : coeffs_) x *= c;
        return *this;
    }
    friend BasicAlternatingTensor operator+(BasicAlternatingTensor a, const BasicAlternatingTensor& b) { return a += b; }
    friend BasicAlternatingTensor operator-(BasicAlternatingTensor a, const BasicAlternatingTensor& b) { return a -= b; }
    friend BasicAlternatingTensor operator*(const T& c, BasicAlternatingTensor a) { return a *= c; }
    friend BasicAlternatingTensor operator*(BasicAlternatingTensor a, const T& c) { return a *= c; }

private:
    void checkIndex(const MultiIndex& I) const {
        if (static_cast<int>(I.size()) != degree_ || !isStrictlyIncreasing(I) || (!I.empty() && I.back() >= dim_))
            throw Error(ErrorCode::InvalidArgument, "multi-index is not a strictly increasing " + std::to_string(degree_) + "-tuple");
    }
    void checkSame(const BasicAlternatingTensor& b) const {
        if (b.dim_ != dim_) throw Error(ErrorCode::Dimension, "tensor dimension mismatch");
        if (b.degree_ != degree_) throw Error(ErrorCode::Degree, "tensor degree mismatch");
        if (b.variance_ != variance_) throw Error(ErrorCode::Variance, "tensor variance mismatch");
    }

    int dim_ = 0;
    int degree_ = 0;
    Variance variance_ = Variance::Covariant;
    std::vector<T> coeffs_ = std::vector<T>(1, T(0.0));
};

using AlternatingTensor = BasicAlternatingTensor<double>;
using JetTensor = BasicAlternatingTensor<Jet>;

template <class T>
BasicAlternatingTensor<T> wedge(const BasicAlternatingTensor<T>& a, const BasicAlternatingTensor<T>& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::Dimension, "wedge: dimension mismatch");
    if (a.variance() != b.variance()) throw Error(ErrorCode::Variance, "wedge: variance mismatch");
    const int n = a.dim();
    if (a.degree() + b.degree() > n) throw Error(ErrorCode::Degree, "wedge: total degree exceeds dimension");
    BasicAlternatingTensor<T> r(n, a.degree() + b.degree(), a.variance());
    const auto& Ia = multiIndices(n, a.degree());
    const auto& Ib = multiIndices(n, b.degree());
    MultiIndex merged;
    for (std::size_t i = 0; i < Ia.size(); ++i) {
        if (isExactZero(a[i])) continue;
        for (std::size_t j = 0; j < Ib.size(); ++j) {
            if (isExactZero(b[j])) continue;
            const int s = shuffleSign(Ia[i], Ib[j], merged);
            if (s == 0) continue;
            T term = a[i] * b[j];
            if (s > 0)
                r[rankOf(merged)] += term;
            else
                r[rankOf(merged)] -= term;
        }
    }
    return r;
}

// iota_w a with iota_{X1^...^Xp} = iota_{Xp} o ... o iota_{X1}.
template <class T>
BasicAlternatingTensor<T> interior(const BasicAlternatingTensor<T>& w, const BasicAlternatingTensor<T>& a) {
    if (w.dim() != a.dim()) throw Error(ErrorCode::Dimension, "interior: dimension mismatch");
    if (w.variance() != Variance::Contravariant || a.variance() != Variance::Covariant)
        throw Error(ErrorCode::Variance, "interior: needs a multivector and a form");
    if (w.degree() > a.degree())
        throw Error(ErrorCode::Degree, "interior: multivector degree " + std::to_string(w.degree()) + " exceeds form degree " +
                                           std::to_string(a.degree()));
    const int n = a.dim();
    BasicAlternatingTensor<T> r(n, a.degree() - w.degree(), Variance::Covariant);
    const auto& Iw = multiIndices(n, w.degree());
    const auto& Ia = multiIndices(n, a.degree());
    MultiIndex rest;
    for (std::size_t j = 0; j < Iw.size(); ++j) {
        if (isExactZero(w[j])) continue;
        for (std::size_t i = 0; i < Ia.size(); ++i) {
            if (isExactZero(a[i])) continue;
            const int s = contractionSign(Iw[j], Ia[i], rest);
            if (s == 0) continue;
            T term = w[j] * a[i];
            if (s > 0)
                r[rankOf(rest)] += term;
            else
                r[rankOf(rest)] -= term;
        }
    }
    return r;
}

// Wedge of a list of 1-tensors; the empty list gives the unit 0-tensor.
template <class T>
BasicAlternatingTensor<T> wedgeAll(const std::vector<BasicAlternatingTensor<T>>& factors, int dim, Variance variance) {
    BasicAlternatingTensor<T> r = BasicAlternatingTensor<T>::unit(dim, variance);
    for (const auto& f : factors) r = wedge(r, f);
    return r;
}

AlternatingTensor values(const JetTensor& t);
JetTensor constantJets(const AlternatingTensor& t);
double maxAbs(const AlternatingTensor& t);
std::string toString(const AlternatingTensor& t, double drop = 1e-14);

// Matrix of Omega -> iota_w Omega on degree-ell forms (rows: degree ell-p, columns: degree ell).
Eigen::MatrixXd contractionMatrix(const AlternatingTensor& w, int ell);
// Matrix of w -> iota_w a on degree-p multivectors (rows: degree k-p, columns: degree p).
Eigen::MatrixXd interiorMapMatrix(const AlternatingTensor& a, int p);

struct NullSpace {
    int rank = 0;
    Eigen::MatrixXd basis;  // columns
    double smallestRelativeSingularValue = 0.0;
};
inline constexpr double kRankTolerance = 1e-10;
NullSpace nullSpace(const Eigen::MatrixXd& m, double relTol = kRankTolerance);

std::vector<AlternatingTensor> annihilator(const AlternatingTensor& w, int ell);
int nondegeneracyOrder(const AlternatingTensor& a, int maxS);

// phi^* a at a point, J the Jacobian of phi (rows: target coordinates).
AlternatingTensor pullbackAt(const AlternatingTensor& a, const Eigen::MatrixXd& J);
// phi_* w at a point for a multivector w.
AlternatingTensor pushforwardAt(const AlternatingTensor& w, const Eigen::MatrixXd& J);

}  // namespace mslie
