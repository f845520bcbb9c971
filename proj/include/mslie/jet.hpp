#pragma once

// Second-order truncated Taylor jets in up to kMaxJetDim variables.
// A jet carries the value, gradient and Hessian of a scalar at a point together
// with the number of derivative orders that are actually valid.

#include <array>
#include <cmath>
#include <vector>

#include "mslie/error.hpp"

namespace mslie {

inline constexpr int kMaxJetDim = 8;
inline constexpr int kMaxJetOrder = 2;

class Jet {
public:
    Jet() = default;
    Jet(double c) : v_(c) {}  // NOLINT: constants convert implicitly so formulas read naturally

    static Jet variable(double value, int index, int n, int order) {
        Jet r(value);
        r.n_ = n;
        r.order_ = order;
        r.g_[static_cast<std::size_t>(index)] = 1.0;
        return r;
    }
    static Jet valueOnly(double value) {
        Jet r(value);
        r.order_ = 0;
        return r;
    }

    double value() const { return v_; }
    int order() const { return order_; }
    int dim() const { return n_; }
    double grad(int i) const { return g_[static_cast<std::size_t>(i)]; }
    double hess(int i, int j) const { return h_[idx(i, j)]; }
    void setGrad(int i, double x) { g_[static_cast<std::size_t>(i)] = x; }
    void setHess(int i, int j, double x) { h_[idx(i, j)] = x; }
    void setShape(int n, int order) {
        n_ = n;
        order_ = order;
    }

    // Derivative along coordinate i; loses one valid order.
    Jet partial(int i) const {
        if (n_ == 0) return Jet(0.0);
        if (order_ <= 0) throw Error(ErrorCode::Numerical, "partial derivative of an order-0 jet");
        Jet r(g_[static_cast<std::size_t>(i)]);
        r.n_ = n_;
        r.order_ = order_ - 1;
        if (r.order_ >= 1)
            for (int j = 0; j < n_; ++j) r.g_[static_cast<std::size_t>(j)] = h_[idx(i, j)];
        return r;
    }

    // f(this) given f, f', f'' at the current value.
    Jet chain(double f0, double f1, double f2) const {
        Jet r(f0);
        r.n_ = n_;
        r.order_ = order_;
        if (order_ >= 1)
            for (int i = 0; i < n_; ++i) r.g_[static_cast<std::size_t>(i)] = f1 * g_[static_cast<std::size_t>(i)];
        if (order_ >= 2)
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j)
                    r.h_[idx(i, j)] = f1 * h_[idx(i, j)] + f2 * g_[static_cast<std::size_t>(i)] * g_[static_cast<std::size_t>(j)];
        return r;
    }

    Jet operator-() const { return chain(-v_, -1.0, 0.0); }

    Jet& operator+=(const Jet& b) {
        combineShape(b);
        v_ += b.v_;
        if (order_ >= 1)
            for (int i = 0; i < n_; ++i) g_[static_cast<std::size_t>(i)] += b.g_[static_cast<std::size_t>(i)];
        if (order_ >= 2)
            for (int i = 0; i < n_ * kMaxJetDim; ++i) h_[static_cast<std::size_t>(i)] += b.h_[static_cast<std::size_t>(i)];
        return *this;
    }
    Jet& operator-=(const Jet& b) {
        combineShape(b);
        v_ -= b.v_;
        if (order_ >= 1)
            for (int i = 0; i < n_; ++i) g_[static_cast<std::size_t>(i)] -= b.g_[static_cast<std::size_t>(i)];
        if (order_ >= 2)
            for (int i = 0; i < n_ * kMaxJetDim; ++i) h_[static_cast<std::size_t>(i)] -= b.h_[static_cast<std::size_t>(i)];
        return *this;
    }
    Jet& operator*=(const Jet& b) {
        const Jet a = *this;
        combineShape(b);
        v_ = a.v_ * b.v_;
        if (order_ >= 2)
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j)
                    h_[idx(i, j)] = a.v_ * b.h_[idx(i, j)] + b.v_ * a.h_[idx(i, j)] +
                                    a.g_[static_cast<std::size_t>(i)] * b.g_[static_cast<std::size_t>(j)] +
                                    b.g_[static_cast<std::size_t>(i)] * a.g_[static_cast<std::size_t>(j)];
        if (order_ >= 1)
            for (int i = 0; i < n_; ++i)
                g_[static_cast<std::size_t>(i)] =
                    a.v_ * b.g_[static_cast<std::size_t>(i)] + b.v_ * a.g_[static_cast<std::size_t>(i)];
        return *this;
    }
    Jet& operator*=(double c) {
        v_ *= c;
        if (order_ >= 1)
            for (int i = 0; i < n_; ++i) g_[static_cast<std::size_t>(i)] *= c;
        if (order_ >= 2)
            for (int i = 0; i < n_ * kMaxJetDim; ++i) h_[static_cast<std::size_t>(i)] *= c;
        return *this;
    }
    Jet& operator/=(const Jet& b) { return *this *= b.chain(1.0 / b.v_, -1.0 / (b.v_ * b.v_), 2.0 / (b.v_ * b.v_ * b.v_)); }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
    friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
    friend Jet operator+(Jet a, double b) { return a += Jet(b); }
    friend Jet operator+(double a, Jet b) { return b += Jet(a); }
    friend Jet operator-(Jet a, double b) { return a -= Jet(b); }
    friend Jet operator-(double a, const Jet& b) { return Jet(a) -= b; }
    friend Jet operator*(Jet a, double b) { return a *= b; }
    friend Jet operator*(double a, Jet b) { return b *= a; }
    friend Jet operator/(Jet a, double b) { return a *= 1.0 / b; }
    friend Jet operator/(double a, const Jet& b) { return Jet(a) /= b; }

private:
    static std::size_t idx(int i, int j) { return static_cast<std::size_t>(i * kMaxJetDim + j); }

    void combineShape(const Jet& b) {
        if (b.n_ != 0 && n_ != 0 && b.n_ != n_) throw Error(ErrorCode::Dimension, "jet dimension mismatch");
        if (b.n_ > n_) n_ = b.n_;
        if (b.order_ < order_) order_ = b.order_;
    }

    double v_ = 0.0;
    int n_ = 0;
    int order_ = kMaxJetOrder;
    std::array<double, kMaxJetDim> g_{};
    std::array<double, kMaxJetDim * kMaxJetDim> h_{};
};

inline Jet exp(const Jet& x) {
    const double e = std::exp(x.value());
    return x.chain(e, e, e);
}
inline Jet log(const Jet& x) {
    const double v = x.value();
    return x.chain(std::log(v), 1.0 / v, -1.0 / (v * v));
}
inline Jet sin(const Jet& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    return x.chain(s, c, -s);
}
inline Jet cos(const Jet& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    return x.chain(c, -s, -c);
}
inline Jet tan(const Jet& x) {
    const double t = std::tan(x.value());
    const double sec2 = 1.0 + t * t;
    return x.chain(t, sec2, 2.0 * t * sec2);
}
inline Jet sqrt(const Jet& x) {
    const double r = std::sqrt(x.value());
    return x.chain(r, 0.5 / r, -0.25 / (r * x.value()));
}
inline Jet cosh(const Jet& x) { return x.chain(std::cosh(x.value()), std::sinh(x.value()), std::cosh(x.value())); }
inline Jet sinh(const Jet& x) { return x.chain(std::sinh(x.value()), std::cosh(x.value()), std::sinh(x.value())); }
inline Jet pow(const Jet& x, int k) {
    const double v = x.value();
    const double f1 = k == 0 ? 0.0 : k * std::pow(v, k - 1);
    const double f2 = (k == 0 || k == 1) ? 0.0 : k * (k - 1) * std::pow(v, k - 2);
    return x.chain(std::pow(v, k), f1, f2);
}

inline double valueOf(double x) { return x; }
inline double valueOf(const Jet& x) { return x.value(); }

using JetVector = std::vector<Jet>;

}  // namespace mslie
