#include <cmath>
#include <random>

#include "doctest.h"
#include "mslie/calculus.hpp"

using namespace mslie;

namespace {

Point pt(std::initializer_list<double> v) { return toPoint(std::vector<double>(v)); }

ChartPtr schwarzChart() {
    return makeChart(3, "xva", [](const Point& p) { return std::abs(p(1)) > 1e-6; });
}

std::vector<VectorField> schwarzFields(const ChartPtr& c) {
    return {VectorField::fromFormula(c, "X1", [](const auto& u) { using T = std::decay_t<decltype(u[0])>; return std::vector<T>{T(0.0), T(0.0), 2.0 * u[1]}; }),
            VectorField::fromFormula(c, "X2", [](const auto& u) { using T = std::decay_t<decltype(u[0])>; return std::vector<T>{T(0.0), u[1], 2.0 * u[2]}; }),
            VectorField::fromFormula(c, "X3", [](const auto& u) {
                using T = std::decay_t<decltype(u[0])>;
                return std::vector<T>{u[1], u[2], 1.5 * u[2] * u[2] / u[1]};
            })};
}

DifferentialForm schwarzTheta(const ChartPtr& c) {
    return DifferentialForm::fromFormula(c, 3, "Theta", [](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        BasicAlternatingTensor<T> t(3, 3, Variance::Covariant);
        t.set({0, 1, 2}, -1.0 / (2.0 * u[1] * u[1] * u[1]));
        return t;
    });
}

std::vector<Point> boxSamples(int n, int count, unsigned seed, double lo = -1.5, double hi = 1.5) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Point> out;
    while (static_cast<int>(out.size()) < count) {
        Point p(n);
        for (int i = 0; i < n; ++i) p(i) = u(rng);
        if (std::abs(p(1)) < 0.2) continue;
        out.push_back(p);
    }
    return out;
}

// A generic smooth 1-form and 2-form on R^3 used for identities.
DifferentialForm someOneForm(const ChartPtr& c) {
    return DifferentialForm::fromFormula(c, 1, "alpha", [](const auto& u) {
        using std::sin, std::cos, std::exp;
        using T = std::decay_t<decltype(u[0])>;
        BasicAlternatingTensor<T> t(3, 1, Variance::Covariant);
        t.set({0}, sin(u[0] * u[1]) + u[2]);
        t.set({1}, exp(0.3 * u[2]) * u[0]);
        t.set({2}, cos(u[1]) * u[2] * u[2] / u[1]);
        return t;
    });
}

}  // namespace

TEST_CASE("jet arithmetic matches finite differences of the same expression") {
    auto f = [](const auto& u) {
        using std::sin, std::exp, std::tan, std::log;
        using T = std::decay_t<decltype(u[0])>;
        return std::vector<T>{sin(u[0]) * exp(u[1]) / (1.0 + u[0] * u[0]), tan(0.3 * u[1]) - log(2.0 + u[0]), 3.0 - u[0] * u[1]};
    };
    const auto eval = formulaEvaluator(2, f);
    const Point x = pt({0.4, -0.7});
    const auto a = eval(x, 2, DiffBackend::analytic());
    const auto d = eval(x, 2, DiffBackend::centralDifference(1e-5));
    for (std::size_t c = 0; c < a.size(); ++c) {
        CHECK(a[c].value() == doctest::Approx(d[c].value()).epsilon(1e-15));
        for (int i = 0; i < 2; ++i) {
            CHECK(std::abs(a[c].grad(i) - d[c].grad(i)) < 1e-8);
            for (int j = 0; j < 2; ++j) CHECK(std::abs(a[c].hess(i, j) - d[c].hess(i, j)) < 1e-5);
        }
    }
}

TEST_CASE("exterior derivative of -dx/v") {
    const auto c = makeChart(2, "xv", [](const Point& p) { return p(1) != 0.0; });
    const auto theta = DifferentialForm::fromFormula(c, 1, "theta1", [](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        BasicAlternatingTensor<T> t(2, 1, Variance::Covariant);
        t.set({0}, -1.0 / u[1]);
        return t;
    });
    for (auto b : {DiffBackend::analytic(), DiffBackend::centralDifference()}) {
        const auto d = exteriorDerivative(theta, b);
        for (double v : {0.5, -1.3, 2.0}) {
            // dv^dx / v^2 = -(1/v^2) dx^dv
            CHECK(d(pt({0.2, v})).get({0, 1}) == doctest::Approx(-1.0 / (v * v)).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(exteriorDerivative(exteriorDerivative(theta)), Error);
}

TEST_CASE("Lie derivative of the area form along x d_x + d_y") {
    const auto c = makeChart(2, "xy");
    const auto X = VectorField::fromFormula(c, "X", [](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        return std::vector<T>{u[0], T(1.0)};
    });
    const auto area = DifferentialForm::constant(c, AlternatingTensor::basis(2, {0, 1}, Variance::Covariant), "area");
    const auto L = lieDerivativeForm(X, area);
    for (const auto& x : {pt({0.0, 0.0}), pt({1.3, -0.2}), pt({-2.0, 5.0})}) CHECK(L(x).get({0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("brackets satisfy the Jacobi identity under both backends") {
    const auto c = schwarzChart();
    const auto X = schwarzFields(c);
    const auto samples = boxSamples(3, 20, 1);
    for (auto b : {DiffBackend::analytic(), DiffBackend::centralDifference()}) {
        const auto J = lieBracket(X[0], lieBracket(X[1], X[2], b), b) + lieBracket(X[1], lieBracket(X[2], X[0], b), b) +
                       lieBracket(X[2], lieBracket(X[0], X[1], b), b);
        CHECK(maxAbsOver(J, samples) < 1e-6);
    }
    // [X1,X2] = X1 in closed form
    CHECK(maxAbsDifference(lieBracket(X[0], X[1]), X[0], samples) < 1e-12);
}

TEST_CASE("d o d vanishes and d commutes with Lie derivatives") {
    const auto c = schwarzChart();
    const auto alpha = someOneForm(c);
    const auto X = schwarzFields(c)[2];
    const auto samples = boxSamples(3, 20, 2);
    for (auto b : {DiffBackend::analytic(), DiffBackend::centralDifference()}) {
        const double tol = b.isAnalytic() ? 1e-10 : 1e-6;
        CHECK(maxAbsOver(exteriorDerivative(exteriorDerivative(alpha, b), b), samples) < tol);
        const auto lhs = lieDerivativeForm(X, exteriorDerivative(alpha, b), b);
        const auto rhs = exteriorDerivative(lieDerivativeForm(X, alpha, b), b);
        CHECK(maxAbsDifference(lhs, rhs, samples) < (b.isAnalytic() ? 1e-9 : 1e-4));
    }
}

TEST_CASE("Cartan formula against a hand computation") {
    // L_X f = X(f) for a function; L_X (f dx) = X(f) dx + f d(X^x)
    const auto c = makeChart(2, "xy");
    const auto X = VectorField::fromFormula(c, "X", [](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        return std::vector<T>{u[1] * u[1], u[0]};
    });
    const auto f = DifferentialForm::fromFormula(c, 0, "f", [](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        BasicAlternatingTensor<T> t(2, 0, Variance::Covariant);
        t[0] = u[0] * u[1];
        return t;
    });
    const auto fdx = DifferentialForm::fromFormula(c, 1, "fdx", [](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        BasicAlternatingTensor<T> t(2, 1, Variance::Covariant);
        t.set({0}, u[0] * u[1]);
        return t;
    });
    const Point x = pt({0.7, -1.1});
    const double X1 = x(1) * x(1), X2 = x(0);
    const double Xf = X1 * x(1) + X2 * x(0);
    CHECK(lieDerivativeForm(X, f)(x)[0] == doctest::Approx(Xf));
    const auto L = lieDerivativeForm(X, fdx)(x);
    // d(X^x) = 2y dy
    CHECK(L.get({0}) == doctest::Approx(Xf));
    CHECK(L.get({1}) == doctest::Approx(x(0) * x(1) * 2.0 * x(1)));
}

TEST_CASE("contraction of the Schwarz symmetries into the invariant volume is -1") {
    const auto c = schwarzChart();
    const auto Y1 = VectorField::fromFormula(c, "Y1", [](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        return std::vector<T>{T(1.0), T(0.0), T(0.0)};
    });
    const auto Y2 = VectorField::fromFormula(c, "Y2", [](const auto& u) { return std::vector{u[0], u[1], u[2]}; });
    const auto Y3 = VectorField::fromFormula(c, "Y3", [](const auto& u) {
        return std::vector{u[0] * u[0], 2.0 * u[1] * u[0], 2.0 * (u[2] * u[0] + u[1] * u[1])};
    });
    const auto contracted = contractField(MultiVectorField::wedgeOf({Y1, Y2, Y3}), schwarzTheta(c));
    for (const auto& x : boxSamples(3, 30, 4)) {
        // oracle: det[Y1 Y2 Y3] times the coefficient of dx^dv^da
        Eigen::Matrix3d m;
        m.col(0) = Y1(x);
        m.col(1) = Y2(x);
        m.col(2) = Y3(x);
        const double coeff = -1.0 / (2.0 * x(1) * x(1) * x(1));
        CHECK(contracted(x)[0] == doctest::Approx(m.determinant() * coeff).epsilon(1e-12));
        CHECK(contracted(x)[0] == doctest::Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("contraction of coordinate fields into the R^5 volume") {
    const auto c = makeChart(5, "x");
    std::vector<VectorField> d;
    for (int i = 0; i < 5; ++i) d.push_back(VectorField::coordinate(c, i));
    AlternatingTensor vol(5, 5, Variance::Covariant);
    vol[0] = 1.0;
    const auto r = contractField(MultiVectorField::wedgeOf(d), DifferentialForm::constant(c, vol));
    CHECK(r(pt({0.1, 0.2, 0.3, 0.4, 0.5}))[0] == 1.0);
    CHECK_THROWS_AS(contractField(MultiVectorField::wedgeOf(d), DifferentialForm::zero(c, 2)), Error);
}

TEST_CASE("pullback of the area form by polar coordinates is r dr^dtheta") {
    const auto polar = makeChart(2, "r,theta", [](const Point& p) { return p(0) > 0.0; });
    const auto plane = makeChart(2, "xy");
    const auto phi = SmoothMap::fromFormula(polar, plane, "polar", [](const auto& u) {
        using std::cos, std::sin;
        return std::vector{u[0] * cos(u[1]), u[0] * sin(u[1])};
    });
    const auto area = DifferentialForm::constant(plane, AlternatingTensor::basis(2, {0, 1}, Variance::Covariant));
    const auto pb = pullback(phi, area);
    for (double r : {0.5, 1.0, 2.5}) CHECK(pb(pt({r, 0.3}))[0] == doctest::Approx(r).epsilon(1e-13));
    // pullback commutes with d
    const auto alpha = DifferentialForm::fromFormula(plane, 1, "alpha", [](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        BasicAlternatingTensor<T> t(2, 1, Variance::Covariant);
        t.set({0}, u[0] * u[1] * u[1]);
        t.set({1}, u[0] * u[0] * u[0]);
        return t;
    });
    const std::vector<Point> s = {pt({0.5, 0.1}), pt({1.7, -2.0}), pt({0.9, 3.0})};
    CHECK(maxAbsDifference(pullback(phi, exteriorDerivative(alpha)), exteriorDerivative(pullback(phi, alpha)), s) < 1e-10);
    CHECK_THROWS_AS(pb(pt({-1.0, 0.0})), Error);
}

TEST_CASE("analytic Jacobians agree with central differences") {
    const auto c = schwarzChart();
    for (const auto& X : schwarzFields(c))
        for (const auto& x : boxSamples(3, 10, 5)) {
            CHECK(X.hasAnalyticJacobian());
            const Eigen::MatrixXd a = X.jacobian(x);
            const Eigen::MatrixXd d = X.jacobian(x, DiffBackend::centralDifference());
            CHECK((a - d).cwiseAbs().maxCoeff() < 1e-6);
        }
    CHECK_THROWS_AS(DiffBackend::centralDifference(1e-2), Error);
    CHECK_THROWS_AS(DiffBackend::centralDifference(1e-9), Error);
}

TEST_CASE("Lie derivative of a multivector: Leibniz and coordinate routes agree") {
    const auto c = schwarzChart();
    const auto X = schwarzFields(c);
    const auto W = MultiVectorField::wedgeOf({X[0], X[2]});
    const auto Y = VectorField::fromFormula(c, "Y", [](const auto& u) {
        using std::sin;
        return std::vector{sin(u[0]) * u[1], u[2] * u[2], u[0] + u[1]};
    });
    const auto leib = lieDerivativeMultivector(Y, W);
    const auto dense = lieDerivativeMultivectorDense(Y, W);
    for (const auto& x : boxSamples(3, 10, 6)) CHECK(maxAbs(leib(x) - dense(x)) < 1e-11);
    // bracket of a field with itself vanishes, so L_X (X ^ Z) = X ^ [X,Z]
    const auto self = lieDerivativeMultivectorDense(X[0], MultiVectorField::wedgeOf({X[0], X[1]}));
    const auto expect = MultiVectorField::wedgeOf({X[0], lieBracket(X[0], X[1])});
    for (const auto& x : boxSamples(3, 5, 7)) CHECK(maxAbs(self(x) - expect(x)) < 1e-12);
}

TEST_CASE("points outside the chart are rejected") {
    const auto c = schwarzChart();
    const auto th = schwarzTheta(c);
    CHECK_THROWS_AS(th(pt({0.0, 0.0, 1.0})), Error);
    try {
        th(pt({0.0, 0.0, 1.0}));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Chart);
    }
    const auto other = makeChart(3, "other");
    CHECK_THROWS_AS(lieBracket(schwarzFields(c)[0], VectorField::zero(other)), Error);
}
