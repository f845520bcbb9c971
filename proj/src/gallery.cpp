#include "mslie/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mslie/error.hpp"

namespace mslie {

using std::cos;
using std::exp;
using std::sin;
using std::tan;

namespace {

template <class V>
using Scalar = typename std::decay_t<V>::value_type;

template <class T>
BasicAlternatingTensor<T> oneForm(std::vector<T> c) {
    return BasicAlternatingTensor<T>::fromComponents(c, Variance::Covariant);
}

template <class T>
BasicAlternatingTensor<T> volume(int n, T c) {
    BasicAlternatingTensor<T> t(n, n, Variance::Covariant);
    t[0] = c;
    return t;
}

template <class T>
BasicAlternatingTensor<T> scalarForm(int n, T c) {
    BasicAlternatingTensor<T> t(n, 0, Variance::Covariant);
    t[0] = c;
    return t;
}

template <class F>
VectorField field(const ChartPtr& chart, std::string name, F f) {
    return VectorField::fromFormula(chart, std::move(name), std::move(f));
}

template <class F>
DifferentialForm form(const ChartPtr& chart, int degree, std::string name, F f) {
    return DifferentialForm::fromFormula(chart, degree, std::move(name), std::move(f));
}

VectorField unit(const ChartPtr& chart, int i, std::string name) {
    return VectorField::coordinate(chart, i).renamed(std::move(name));
}

DifferentialForm constantVolume(const ChartPtr& chart, double c, std::string name) {
    AlternatingTensor t(chart->dim(), chart->dim(), Variance::Covariant);
    t[0] = c;
    return DifferentialForm::constant(chart, t, std::move(name));
}

// Projection keeping the listed coordinates and the section filling the others with zeros.
QuotientChart coordinateQuotient(std::string name, const ChartPtr& total, const ChartPtr& base, std::vector<int> kept,
                                 std::vector<VectorField> fibers) {
    const int n = total->dim();
    auto pi = SmoothMap::fromFormula(total, base, "pi_" + name, [kept](const auto& u) {
        using T = Scalar<decltype(u)>;
        std::vector<T> y;
        for (int i : kept) y.push_back(u[static_cast<std::size_t>(i)]);
        return y;
    });
    auto sigma = SmoothMap::fromFormula(base, total, "sigma_" + name, [kept, n](const auto& y) {
        using T = Scalar<decltype(y)>;
        std::vector<T> u(static_cast<std::size_t>(n), T(0.0));
        for (std::size_t j = 0; j < kept.size(); ++j) u[static_cast<std::size_t>(kept[j])] = y[j];
        return u;
    });
    return {std::move(name), std::move(pi), std::move(sigma), std::move(fibers)};
}

ReductionScheme makeScheme(std::string name, const FieldFamily& symmetries, const std::vector<int>& generators,
                           const DifferentialForm& theta, QuotientChart q) {
    std::vector<VectorField> gens;
    for (int i : generators) gens.push_back(symmetries[static_cast<std::size_t>(i)]);
    FieldFamily family(name, gens);
    auto w = MultiVectorField::wedgeOf(gens, "w_" + name);
    return {std::move(name), std::move(family), std::move(w), theta, std::move(q)};
}

std::function<Point(std::mt19937_64&)> boxSampler(int n, double lo, double hi,
                                                  std::function<bool(const Point&)> accept = {}) {
    return [n, lo, hi, accept](std::mt19937_64& g) {
        std::uniform_real_distribution<double> u(lo, hi);
        Point p(n);
        do {
            for (int i = 0; i < n; ++i) p(i) = u(g);
        } while (accept && !accept(p));
        return p;
    };
}

Coefficient sine(double A, double omega, double phi = 0.0, double offset = 0.0) {
    return Coefficient::sine(A, omega, phi, offset);
}

// ---------------------------------------------------------------- Schwarz

constexpr double kSchwarzGuard = 1e-6;

ChartPtr schwarzChart() {
    static const ChartPtr c = makeChart(3, "x,v,a", [](const Point& p) { return std::abs(p(1)) > kSchwarzGuard; });
    return c;
}

ChartPtr schwarzBase() {
    static const ChartPtr c = makeChart(2, "xbar,abar");
    return c;
}

std::vector<VectorField> schwarzReducedFields() {
    const auto B = schwarzBase();
    return {field(B, "Xbar1", [](const auto& u) { return std::vector<Scalar<decltype(u)>>{0.0, 2.0}; }),
            field(B, "Xbar2", [](const auto& u) { return std::vector<Scalar<decltype(u)>>{-u[0], u[1]}; }),
            field(B, "Xbar3", [](const auto& u) {
                return std::vector<Scalar<decltype(u)>>{1.0 - u[0] * u[1], 0.5 * u[1] * u[1]};
            })};
}

DifferentialForm schwarzReducedForm() {
    AlternatingTensor t(2, 2, Variance::Covariant);
    t[0] = 0.5;
    return DifferentialForm::constant(schwarzBase(), t, "Theta_bar");
}

ExampleBundle makeSchwarz() {
    const auto M = schwarzChart();
    auto X1 = field(M, "X1", [](const auto& u) { return std::vector<Scalar<decltype(u)>>{0.0, 0.0, 2.0 * u[1]}; });
    auto X2 = field(M, "X2", [](const auto& u) { return std::vector<Scalar<decltype(u)>>{0.0, u[1], 2.0 * u[2]}; });
    auto X3 = field(M, "X3", [](const auto& u) {
        return std::vector<Scalar<decltype(u)>>{u[1], u[2], 1.5 * u[2] * u[2] / u[1]};
    });
    auto Y1 = field(M, "Y1", [](const auto& u) { return std::vector<Scalar<decltype(u)>>{1.0, 0.0, 0.0}; });
    auto Y2 = field(M, "Y2", [](const auto& u) { return std::vector<Scalar<decltype(u)>>{u[0], u[1], u[2]}; });
    auto Y3 = field(M, "Y3", [](const auto& u) {
        const auto &x = u[0], &v = u[1], &a = u[2];
        return std::vector<Scalar<decltype(u)>>{x * x, 2.0 * v * x, 2.0 * (a * x + v * v)};
    });
    auto theta = form(M, 3, "Theta_S", [](const auto& u) { return volume(3, -0.5 / (u[1] * u[1] * u[1])); });

    ExampleBundle e;
    e.id = "schwarz";
    e.title = "Schwarzian equation as a first-order system";
    e.bundle.name = "schwarz";
    e.bundle.system.basis = FieldFamily("V_S", {X1, X2, X3});
    e.bundle.system.coefficients = TimeCoefficients::constants({-0.25, 0.0, 1.0});
    e.bundle.theta = theta;
    e.symmetries = FieldFamily("Sym_S", {Y1, Y2, Y3});

    auto pi = SmoothMap::fromFormula(M, schwarzBase(), "pi_y2", [](const auto& u) {
        return std::vector<Scalar<decltype(u)>>{u[0] / u[1], u[2] / u[1]};
    });
    auto sigma = SmoothMap::fromFormula(schwarzBase(), M, "sigma_y2", [](const auto& y) {
        return std::vector<Scalar<decltype(y)>>{y[0], 1.0, y[1]};
    });
    e.schemes.push_back(makeScheme("y2", e.symmetries, {1}, theta, {"y2", pi, sigma, {Y2}}));

    e.golden.brackets = {{"Schwarz bracket table"}, {{0, 1, 0, 1.0}, {0, 2, 1, 2.0}, {1, 2, 2, 1.0}}};
    e.golden.symmetryBrackets = GoldenBrackets{{"derived"}, {{0, 1, 0, 1.0}, {0, 2, 1, 2.0}, {1, 2, 2, 1.0}}};
    e.golden.theta = theta;
    e.golden.thetaAnchor = "Schwarz multisymplectic form";
    auto ham = [&](const VectorField& X, const char* name, auto f) {
        e.golden.hamiltonianForms.push_back({{X, form(M, 1, name, f)}, std::string("Schwarz Hamiltonian forms")});
    };
    ham(X1, "theta1", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return oneForm<T>({-1.0 / u[1], 0.0, 0.0});
    });
    ham(X2, "theta2", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        const auto &v = u[1], &a = u[2];
        return oneForm<T>({-a / (2.0 * v * v), 1.0 / (2.0 * v), 0.0});
    });
    ham(X3, "theta3", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        const auto &v = u[1], &a = u[2];
        return oneForm<T>({-a * a / (4.0 * v * v * v), a / (v * v), -1.0 / (2.0 * v)});
    });
    auto symHam = [&](const VectorField& Y, const char* name, auto f) {
        e.golden.hamiltonianForms.push_back({{Y, form(M, 1, name, f)}, std::string("derived")});
    };
    symHam(Y1, "thetaY1", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return oneForm<T>({0.0, 0.0, 1.0 / (4.0 * u[1] * u[1])});
    });
    symHam(Y2, "thetaY2", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        const auto &x = u[0], &v = u[1], &a = u[2];
        return oneForm<T>({-a / (2.0 * v * v), a * x / (2.0 * v * v * v), 0.0});
    });
    symHam(Y3, "thetaY3", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        const auto &x = u[0], &v = u[1], &a = u[2];
        return oneForm<T>({-a * x / (v * v), -x / v + a * x * x / (2.0 * v * v * v), 0.0});
    });

    SchemeGolden g{{"Schwarz reduction"}, "y2", schwarzReducedForm(), {}, true};
    for (auto& X : schwarzReducedFields()) g.reducedFields.emplace_back(X);
    e.golden.reductions.push_back(std::move(g));
    e.golden.noetherValue = -1.0;

    e.sampler = [](std::mt19937_64& g) {
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        Point p(3);
        p(0) = u(g);
        do p(1) = u(g);
        while (std::abs(p(1)) < 0.2);
        p(2) = u(g);
        return p;
    };
    // abar stays inside (-1, 1) along the shifted orbits too
    e.flowTestPoint = (Point(3) << 0.1, 1.0, -0.5).finished();
    return e;
}

// ---------------------------------------------------------------- DBH

ChartPtr dbhChart() {
    static const ChartPtr c = makeChart(3, "w1,w2,w3", [](const Point& w) {
        return std::abs((w(0) - w(1)) * (w(0) - w(2)) * (w(1) - w(2))) > 1e-12;
    });
    return c;
}

// ---------------------------------------------------------------- control

ChartPtr controlChart() {
    static const ChartPtr c = makeChart(5, "x1,...,x5");
    return c;
}

ChartPtr controlBase() {
    static const ChartPtr c = makeChart(3, "x1,x2,x3");
    return c;
}

ExampleBundle makeControl() {
    const auto M = controlChart();
    auto X2 = field(M, "X2", [](const auto& u) {
        return std::vector<Scalar<decltype(u)>>{0.0, 1.0, u[0], u[0] * u[0], 2.0 * u[0] * u[1]};
    });
    auto X3 = field(M, "X3", [](const auto& u) {
        return std::vector<Scalar<decltype(u)>>{0.0, 0.0, 1.0, 2.0 * u[0], 2.0 * u[1]};
    });
    auto Y1 = field(M, "Y1", [](const auto& u) {
        return std::vector<Scalar<decltype(u)>>{1.0, 0.0, u[1], 2.0 * u[2], u[1] * u[1]};
    });
    auto Y2 = field(M, "Y2", [](const auto& u) {
        return std::vector<Scalar<decltype(u)>>{0.0, 1.0, 0.0, 0.0, 2.0 * u[2]};
    });
    auto theta = constantVolume(M, 1.0, "Theta_B");

    ExampleBundle e;
    e.id = "control5";
    e.title = "Control system on R^5";
    e.bundle.name = "control5";
    e.bundle.system.basis = FieldFamily("V_C", {unit(M, 0, "X1"), X2, X3, unit(M, 3, "X4"), unit(M, 4, "X5")});
    e.bundle.system.coefficients = TimeCoefficients({Coefficient::constant(1.0), sine(1.0, 1.0), Coefficient::constant(0.0),
                                                     Coefficient::constant(0.0), Coefficient::constant(0.0)});
    e.bundle.theta = theta;
    e.symmetries = FieldFamily("Sym_C", {Y1, Y2, unit(M, 2, "Y3"), unit(M, 3, "Y4"), unit(M, 4, "Y5")});

    const auto B = controlBase();
    e.schemes.push_back(makeScheme("y45", e.symmetries, {3, 4}, theta,
                                   coordinateQuotient("y45", M, B, {0, 1, 2}, {e.symmetries[3], e.symmetries[4]})));
    e.reconstruction = {"y45"};

    e.golden.brackets = {{"control commutation relations"},
                         {{0, 1, 2, 1.0}, {0, 2, 3, 2.0}, {1, 2, 4, 2.0}}};
    e.golden.symmetryBrackets = GoldenBrackets{{"control symmetry algebra"},
                                               {{0, 1, 2, -1.0}, {0, 2, 3, -2.0}, {1, 2, 4, -2.0}}};
    e.golden.theta = theta;
    e.golden.thetaAnchor = "control volume form";
    GoldenCoframe eta{{"control dual coframe"}, {}, {}};
    eta.eta.push_back(coordinateDifferential(M, 0).renamed("eta1"));
    eta.eta.push_back(coordinateDifferential(M, 1).renamed("eta2"));
    eta.eta.push_back(form(M, 1, "eta3", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return oneForm<T>({0.0, -u[0], 1.0, 0.0, 0.0});
    }));
    eta.eta.push_back(form(M, 1, "eta4", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return oneForm<T>({0.0, u[0] * u[0], -2.0 * u[0], 1.0, 0.0});
    }));
    eta.eta.push_back(form(M, 1, "eta5", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return oneForm<T>({0.0, 0.0, -2.0 * u[1], 0.0, 1.0});
    }));
    e.golden.coframe = std::move(eta);

    SchemeGolden g{{"control reduction"}, "y45", constantVolume(B, 1.0, "Theta_tilde"), {}, false};
    g.reducedFields.emplace_back(unit(B, 0, "Xt1"));
    g.reducedFields.emplace_back(field(B, "Xt2", [](const auto& y) { return std::vector<Scalar<decltype(y)>>{0.0, 1.0, y[0]}; }));
    g.reducedFields.emplace_back(unit(B, 2, "Xt3"));
    g.reducedFields.emplace_back(std::nullopt);
    g.reducedFields.emplace_back(std::nullopt);
    e.golden.reductions.push_back(std::move(g));
    e.golden.noetherValue = 1.0;

    e.sampler = boxSampler(5, -2.0, 2.0);
    e.flowTestPoint = (Point(5) << 0.1, -0.2, 0.3, 0.0, 0.5).finished();
    return e;
}

// ---------------------------------------------------------------- dqho and osc_spin share the sl2 half

ChartPtr r6Chart() {
    static const ChartPtr c = makeChart(6, "v1,...,v6");
    return c;
}

ChartPtr spinChart() {
    static const ChartPtr c = makeChart(6, "v1,...,v6", [](const Point& v) { return std::abs(std::cos(v(4))) > 1e-6; });
    return c;
}

ChartPtr baseLow(int which) {
    // which: 0 dqho v1..v3, 1 dqho v4..v6, 2 osc v1..v3, 3 osc v4..v6
    static const ChartPtr c[4] = {makeChart(3, "v1,v2,v3"), makeChart(3, "v4,v5,v6"), makeChart(3, "v1,v2,v3"),
                                  makeChart(3, "v4,v5,v6", [](const Point& y) { return std::abs(std::cos(y(1))) > 1e-6; })};
    return c[which];
}

std::vector<VectorField> sl2Right(const ChartPtr& M) {
    return {unit(M, 0, "X1"), field(M, "X2", [](const auto& u) {
                using T = Scalar<decltype(u)>;
                return std::vector<T>{u[0], 1.0, 0.0, 0.0, 0.0, 0.0};
            }),
            field(M, "X3", [](const auto& u) {
                using T = Scalar<decltype(u)>;
                return std::vector<T>{u[0] * u[0], 2.0 * u[0], exp(u[1]), 0.0, 0.0, 0.0};
            })};
}

std::vector<VectorField> sl2Left(const ChartPtr& M) {
    return {field(M, "Y1", [](const auto& u) {
                using T = Scalar<decltype(u)>;
                return std::vector<T>{exp(u[1]), 2.0 * u[2], u[2] * u[2], 0.0, 0.0, 0.0};
            }),
            field(M, "Y2", [](const auto& u) {
                using T = Scalar<decltype(u)>;
                return std::vector<T>{0.0, 1.0, u[2], 0.0, 0.0, 0.0};
            }),
            unit(M, 2, "Y3")};
}

std::vector<DifferentialForm> sl2Coframe(const ChartPtr& M) {
    return {form(M, 1, "eta1", [](const auto& u) {
                using T = Scalar<decltype(u)>;
                return oneForm<T>({1.0, -u[0], u[0] * u[0] * exp(-u[1]), 0.0, 0.0, 0.0});
            }),
            form(M, 1, "eta2", [](const auto& u) {
                using T = Scalar<decltype(u)>;
                return oneForm<T>({0.0, 1.0, -2.0 * u[0] * exp(-u[1]), 0.0, 0.0, 0.0});
            }),
            form(M, 1, "eta3", [](const auto& u) {
                using T = Scalar<decltype(u)>;
                return oneForm<T>({0.0, 0.0, exp(-u[1]), 0.0, 0.0, 0.0});
            })};
}

// The sl2 fields read on the base v1,v2,v3.
std::vector<std::optional<VectorField>> sl2Reduced(const ChartPtr& B) {
    return {unit(B, 0, "Xt1"), field(B, "Xt2", [](const auto& y) {
                using T = Scalar<decltype(y)>;
                return std::vector<T>{y[0], 1.0, 0.0};
            }),
            field(B, "Xt3", [](const auto& y) {
                using T = Scalar<decltype(y)>;
                return std::vector<T>{y[0] * y[0], 2.0 * y[0], exp(y[1])};
            })};
}

DifferentialForm lowVolume(const ChartPtr& B, std::string name) {
    return form(B, 3, std::move(name), [](const auto& y) { return volume(3, -exp(-y[1])); });
}

ExampleBundle makeDqho() {
    const auto M = r6Chart();
    auto R = sl2Right(M);
    R.push_back(unit(M, 3, "X4"));
    R.push_back(field(M, "X5", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return std::vector<T>{0.0, 0.0, 0.0, 0.0, 1.0, -u[3]};
    }));
    R.push_back(unit(M, 5, "X6"));
    R[0] = field(M, "X1", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return std::vector<T>{1.0, 0.0, 0.0, u[4], 0.0, -0.5 * u[4] * u[4]};
    });
    R[1] = field(M, "X2", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return std::vector<T>{u[0], 1.0, 0.0, 0.5 * u[3], -0.5 * u[4], 0.0};
    });
    R[2] = field(M, "X3", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return std::vector<T>{u[0] * u[0], 2.0 * u[0], exp(u[1]), 0.0, -u[3], 0.5 * u[3] * u[3]};
    });
    auto L = sl2Left(M);
    L.push_back(field(M, "Y4", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        const T E = exp(-0.5 * u[1]);
        const T s = exp(u[1]) - u[0] * u[2];
        return std::vector<T>{0.0, 0.0, 0.0, E * s, -E * u[2], -E * s * u[4]};
    }));
    L.push_back(field(M, "Y5", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        const T E = exp(-0.5 * u[1]);
        return std::vector<T>{0.0, 0.0, 0.0, u[0] * E, E, -u[0] * u[4] * E};
    }));
    L.push_back(unit(M, 5, "Y6"));
    auto theta = form(M, 6, "Theta_do", [](const auto& u) { return volume(6, exp(-u[1])); });

    ExampleBundle e;
    e.id = "dqho";
    e.title = "Dissipative quantum harmonic oscillator";
    e.bundle.name = "dqho";
    e.bundle.system.basis = FieldFamily("V_do", R);
    e.bundle.system.coefficients = TimeCoefficients({sine(0.2, 1.0), Coefficient::constant(0.1), Coefficient::constant(-0.1),
                                                     sine(0.3, 1.0, std::numbers::pi / 2), Coefficient::constant(0.2),
                                                     Coefficient::constant(0.1)});
    e.bundle.theta = theta;
    e.symmetries = FieldFamily("Sym_do", L);

    e.schemes.push_back(makeScheme("sl123", e.symmetries, {0, 1, 2}, theta,
                                   coordinateQuotient("sl123", M, baseLow(1), {3, 4, 5}, {L[0], L[1], L[2]})));
    e.schemes.push_back(makeScheme("h456", e.symmetries, {3, 4, 5}, theta,
                                   coordinateQuotient("h456", M, baseLow(0), {0, 1, 2}, {L[3], L[4], L[5]})));
    e.reconstruction = {"sl123", "h456"};

    e.golden.brackets = {{"dqho commutation relations"},
                         {{0, 1, 0, 1.0},
                          {0, 2, 1, 2.0},
                          {1, 2, 2, 1.0},
                          {1, 3, 3, -0.5},
                          {2, 3, 4, 1.0},
                          {0, 4, 3, -1.0},
                          {1, 4, 4, 0.5},
                          {3, 4, 5, -1.0}}};
    e.golden.symmetryBrackets = GoldenBrackets{{"derived"},
                                               {{0, 1, 0, -1.0},
                                                {0, 2, 1, -2.0},
                                                {1, 2, 2, -1.0},
                                                {1, 3, 3, 0.5},
                                                {2, 3, 4, -1.0},
                                                {0, 4, 3, 1.0},
                                                {1, 4, 4, -0.5},
                                                {3, 4, 5, 1.0}}};
    e.golden.theta = theta;
    e.golden.thetaAnchor = "dqho volume form";

    // The displayed eta4 and eta6 only invert the frame at the origin.
    GoldenCoframe eta{{"dqho dual coframe"}, sl2Coframe(M), {Point::Zero(6)}};
    eta.eta.push_back(form(M, 1, "eta4", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        const auto &v1 = u[0], &v4 = u[3], &v5 = u[4];
        return oneForm<T>({-v5, v1 * v5 - 0.5 * v4 + 0.5 * v4 * v5,
                           (v1 * v4 - v1 * v1 * v5 - v1 * v4 * v5 + v4 * v4) * exp(-u[1]), 1.0, v4, 0.0});
    }));
    eta.eta.push_back(form(M, 1, "eta5", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return oneForm<T>({0.0, 0.5 * u[4], (u[3] - u[0] * u[4]) * exp(-u[1]), 0.0, 1.0, 0.0});
    }));
    eta.eta.push_back(form(M, 1, "eta6", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        const auto &v1 = u[0], &v4 = u[3], &v5 = u[4];
        return oneForm<T>({0.5 * v5, -0.5 * v1 * v5, 0.5 * (v1 * v1 * v5 - v4 * v4) * exp(-u[1]), 0.0, 0.0, 1.0});
    }));
    e.golden.coframe = std::move(eta);

    const auto B1 = baseLow(1);
    SchemeGolden g1{{"dqho reduction"}, "sl123", constantVolume(B1, 1.0, "Theta_sl"), {}, true};
    g1.reducedFields = {field(B1, "Xt1", [](const auto& y) {
                            using T = Scalar<decltype(y)>;
                            return std::vector<T>{y[1], 0.0, -0.5 * y[1] * y[1]};
                        }),
                        field(B1, "Xt2", [](const auto& y) {
                            using T = Scalar<decltype(y)>;
                            return std::vector<T>{0.5 * y[0], -0.5 * y[1], 0.0};
                        }),
                        field(B1, "Xt3", [](const auto& y) {
                            using T = Scalar<decltype(y)>;
                            return std::vector<T>{0.0, -y[0], 0.5 * y[0] * y[0]};
                        }),
                        unit(B1, 0, "Xt4"), field(B1, "Xt5", [](const auto& y) {
                            using T = Scalar<decltype(y)>;
                            return std::vector<T>{0.0, 1.0, -y[0]};
                        }),
                        unit(B1, 2, "Xt6")};
    e.golden.reductions.push_back(std::move(g1));

    const auto B0 = baseLow(0);
    SchemeGolden g2{{"derived"}, "h456", lowVolume(B0, "Theta_h"), sl2Reduced(B0), false};
    g2.reducedFields.resize(6);
    e.golden.reductions.push_back(std::move(g2));
    e.golden.noetherValue = 1.0;

    e.sampler = boxSampler(6, -1.0, 1.0);
    e.flowTestPoint = Point::Constant(6, 0.1);
    return e;
}

ExampleBundle makeOscSpin() {
    const auto M = spinChart();
    auto R = sl2Right(M);
    R.push_back(unit(M, 3, "X4"));
    R.push_back(field(M, "X5", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return std::vector<T>{0.0, 0.0, 0.0, sin(u[3]) * tan(u[4]), cos(u[3]), sin(u[3]) / cos(u[4])};
    }));
    R.push_back(field(M, "X6", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return std::vector<T>{0.0, 0.0, 0.0, cos(u[3]) * tan(u[4]), -sin(u[3]), cos(u[3]) / cos(u[4])};
    }));
    auto L = sl2Left(M);
    L.push_back(field(M, "Y4", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return std::vector<T>{0.0, 0.0, 0.0, cos(u[5]) / cos(u[4]), -sin(u[5]), cos(u[5]) * tan(u[4])};
    }));
    L.push_back(field(M, "Y5", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return std::vector<T>{0.0, 0.0, 0.0, sin(u[5]) / cos(u[4]), cos(u[5]), sin(u[5]) * tan(u[4])};
    }));
    L.push_back(unit(M, 5, "Y6"));
    auto theta = form(M, 6, "Theta_os", [](const auto& u) { return volume(6, exp(-u[1]) * cos(u[4])); });

    ExampleBundle e;
    e.id = "osc_spin";
    e.title = "Quantum oscillator coupled to a spin";
    e.bundle.name = "osc_spin";
    e.bundle.system.basis = FieldFamily("V_os", R);
    e.bundle.system.coefficients = TimeCoefficients({sine(0.2, 1.0), Coefficient::constant(0.1), Coefficient::constant(-0.1),
                                                     Coefficient::constant(0.2), sine(0.1, 1.0), sine(0.1, 2.0, std::numbers::pi / 2)});
    e.bundle.theta = theta;
    e.symmetries = FieldFamily("Sym_os", L);

    e.schemes.push_back(makeScheme("sl123", e.symmetries, {0, 1, 2}, theta,
                                   coordinateQuotient("sl123", M, baseLow(3), {3, 4, 5}, {L[0], L[1], L[2]})));
    e.schemes.push_back(makeScheme("so456", e.symmetries, {3, 4, 5}, theta,
                                   coordinateQuotient("so456", M, baseLow(2), {0, 1, 2}, {L[3], L[4], L[5]})));
    e.reconstruction = {"sl123", "so456"};

    e.golden.brackets = {{"oscillator-spin commutation relations"},
                         {{0, 1, 0, 1.0}, {0, 2, 1, 2.0}, {1, 2, 2, 1.0}, {3, 4, 5, 1.0}, {3, 5, 4, -1.0}, {4, 5, 3, 1.0}}};
    e.golden.symmetryBrackets = GoldenBrackets{
        {"oscillator-spin symmetries"},
        {{0, 1, 0, -1.0}, {0, 2, 1, -2.0}, {1, 2, 2, -1.0}, {3, 4, 5, -1.0}, {3, 5, 4, 1.0}, {4, 5, 3, -1.0}}};
    e.golden.theta = theta;
    e.golden.thetaAnchor = "oscillator-spin volume form";

    GoldenCoframe eta{{"oscillator-spin dual coframe"}, sl2Coframe(M), {}};
    eta.eta.push_back(form(M, 1, "eta4", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return oneForm<T>({0.0, 0.0, 0.0, 1.0, 0.0, -sin(u[4])});
    }));
    eta.eta.push_back(form(M, 1, "eta5", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return oneForm<T>({0.0, 0.0, 0.0, 0.0, cos(u[3]), sin(u[3]) * cos(u[4])});
    }));
    eta.eta.push_back(form(M, 1, "eta6", [](const auto& u) {
        using T = Scalar<decltype(u)>;
        return oneForm<T>({0.0, 0.0, 0.0, 0.0, -sin(u[3]), cos(u[3]) * cos(u[4])});
    }));
    e.golden.coframe = std::move(eta);

    const auto B3 = baseLow(3);
    SchemeGolden g1{{"oscillator-spin reduction by sl2"},
                    "sl123",
                    form(B3, 3, "Theta_sl", [](const auto& y) { return volume(3, cos(y[1])); }),
                    {std::nullopt, std::nullopt, std::nullopt},
                    false};
    g1.reducedFields.emplace_back(unit(B3, 0, "Xt4"));
    g1.reducedFields.emplace_back(field(B3, "Xt5", [](const auto& y) {
        using T = Scalar<decltype(y)>;
        return std::vector<T>{sin(y[0]) * tan(y[1]), cos(y[0]), sin(y[0]) / cos(y[1])};
    }));
    g1.reducedFields.emplace_back(field(B3, "Xt6", [](const auto& y) {
        using T = Scalar<decltype(y)>;
        return std::vector<T>{cos(y[0]) * tan(y[1]), -sin(y[0]), cos(y[0]) / cos(y[1])};
    }));
    e.golden.reductions.push_back(std::move(g1));

    const auto B2 = baseLow(2);
    SchemeGolden g2{{"oscillator-spin reduction by so3"}, "so456", lowVolume(B2, "Theta_so"), sl2Reduced(B2), false};
    g2.reducedFields.resize(6);
    e.golden.reductions.push_back(std::move(g2));
    e.golden.noetherValue = 1.0;

    e.sampler = boxSampler(6, -1.2, 1.2, [](const Point& v) { return std::abs(std::cos(v(4))) >= 0.2; });
    e.flowTestPoint = Point::Constant(6, 0.1);
    return e;
}

// ---------------------------------------------------------------- R^8

ChartPtr r8Chart() {
    static const ChartPtr c = makeChart(8, "x1,...,x8");
    return c;
}

ChartPtr r8Base(int which) {
    static const ChartPtr c[3] = {makeChart(6, "x3,...,x8"), makeChart(6, "x1,x2,x3,x6,x7,x8"), makeChart(6, "x1,...,x6")};
    return c[which];
}

int permutationSign(std::vector<int> p) {
    int s = 1;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

ExampleBundle makeR8() {
    const auto M = r8Chart();
    AlternatingTensor omega(8, 6, Variance::Covariant);
    for (std::size_t i = 0; i < omega.size(); ++i) omega[i] = 1.0;
    auto theta = DifferentialForm::constant(M, omega, "Omega_S");

    std::vector<VectorField> d;
    for (int i = 0; i < 8; ++i) d.push_back(unit(M, i, "X" + std::to_string(i + 1)));

    ExampleBundle e;
    e.id = "r8_volume";
    e.title = "Translations of R^8 with a constant 6-form";
    e.bundle.name = "r8_volume";
    e.bundle.system.basis = FieldFamily("V_8", d);
    std::vector<Coefficient> b;
    for (int i = 0; i < 8; ++i) b.push_back(sine(0.1 * (i + 1), 1.0, 0.3 * i, 0.05));
    e.bundle.system.coefficients = TimeCoefficients(std::move(b));
    e.bundle.theta = theta;
    std::vector<VectorField> sym;
    for (int i = 0; i < 8; ++i) sym.push_back(unit(M, i, "Y" + std::to_string(i + 1)));
    e.symmetries = FieldFamily("Sym_8", sym);

    const std::vector<std::pair<std::string, std::pair<int, int>>> planes = {{"za", {0, 1}}, {"zb", {3, 4}}, {"zc", {6, 7}}};
    for (std::size_t s = 0; s < planes.size(); ++s) {
        const auto& [name, ij] = planes[s];
        std::vector<int> kept;
        for (int i = 0; i < 8; ++i)
            if (i != ij.first && i != ij.second) kept.push_back(i);
        const auto B = r8Base(static_cast<int>(s));
        e.schemes.push_back(makeScheme(name, e.symmetries, {ij.first, ij.second}, theta,
                                       coordinateQuotient(name, M, B, kept, {sym[static_cast<std::size_t>(ij.first)],
                                                                              sym[static_cast<std::size_t>(ij.second)]})));
        // Omega(d_i, d_j, d_J) = sign of the permutation (i, j, J) of its sorted entries.
        AlternatingTensor red(6, 4, Variance::Covariant);
        const auto& J = multiIndices(6, 4);
        for (std::size_t r = 0; r < J.size(); ++r) {
            std::vector<int> p = {ij.first, ij.second};
            for (int j : J[r]) p.push_back(kept[static_cast<std::size_t>(j)]);
            red[r] = permutationSign(p);
        }
        SchemeGolden g{{"R^8 reductions"}, name, DifferentialForm::constant(B, red, "Omega_" + name), {}, false};
        for (int i = 0; i < 8; ++i) {
            const auto it = std::find(kept.begin(), kept.end(), i);
            if (it == kept.end())
                g.reducedFields.emplace_back(std::nullopt);
            else
                g.reducedFields.emplace_back(unit(B, static_cast<int>(it - kept.begin()), "Xt" + std::to_string(i + 1)));
        }
        e.golden.reductions.push_back(std::move(g));
    }
    e.reconstruction = {"za", "zb", "zc"};

    e.golden.brackets = {{"translations commute"}, {}};
    e.golden.symmetryBrackets = GoldenBrackets{{"translations commute"}, {}};
    e.golden.theta = theta;
    e.golden.thetaAnchor = "R^8 6-form";

    e.sampler = boxSampler(8, -1.0, 1.0);
    e.flowTestPoint = Point::Constant(8, 0.1);
    return e;
}

}  // namespace

// ---------------------------------------------------------------- public

std::vector<Point> ExampleBundle::samples(int count, unsigned long seed) const {
    std::mt19937_64 g(seed);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) out.push_back(sampler(g));
    return out;
}

const ReductionScheme& ExampleBundle::scheme(const std::string& name) const {
    for (const auto& s : schemes)
        if (s.name == name) return s;
    throw Error(ErrorCode::UnknownEntity, "example " + id + " has no scheme \"" + name + "\"");
}

const SchemeGolden* ExampleBundle::schemeGolden(const std::string& name) const {
    for (const auto& g : golden.reductions)
        if (g.scheme == name) return &g;
    return nullptr;
}

const std::vector<std::string>& exampleIds() {
    static const std::vector<std::string> ids = {"schwarz", "dbh", "control5", "dqho", "osc_spin", "r8_volume"};
    return ids;
}

ExampleBundle loadDbh(double alpha1, double alpha2, double alpha3) {
    const auto M = dbhChart();
    const double a1 = alpha1 * alpha1, a2 = alpha2 * alpha2, a3 = alpha3 * alpha3;
    auto X1 = field(M, "X1", [](const auto& u) { return std::vector<Scalar<decltype(u)>>{1.0, 1.0, 1.0}; });
    auto X2 = field(M, "X2", [](const auto& u) { return std::vector<Scalar<decltype(u)>>{u[0], u[1], u[2]}; });
    auto X3 = field(M, "X3", [a1, a2, a3](const auto& u) {
        using T = Scalar<decltype(u)>;
        const auto &w1 = u[0], &w2 = u[1], &w3 = u[2];
        const T tau2 = a1 * (w1 - w2) * (w3 - w1) + a2 * (w2 - w3) * (w1 - w2) + a3 * (w3 - w1) * (w2 - w3);
        return std::vector<T>{-(w3 * w2 - w1 * (w3 + w2) + tau2), -(w1 * w3 - w2 * (w1 + w3) + tau2),
                              -(w2 * w1 - w3 * (w2 + w1) + tau2)};
    });

    ExampleBundle e;
    e.id = "dbh";
    e.title = "Generalised Darboux-Brioschi-Halphen system";
    e.parameters = {alpha1, alpha2, alpha3};
    e.bundle.name = "dbh";
    e.bundle.system.basis = FieldFamily("V_DBH", {X1, X2, X3});
    e.bundle.system.coefficients = TimeCoefficients::constants({0.0, 0.0, -1.0});
    e.bundle.theta = invariantVolume(e.bundle.system.basis).renamed("Theta_DBH");

    e.golden.brackets = {{"DBH commutation relations"}, {{0, 1, 0, 1.0}, {0, 2, 1, 2.0}, {1, 2, 2, 1.0}}};
    e.golden.theta = form(M, 3, "Theta_DBH_closed", [](const auto& u) {
        const auto &w1 = u[0], &w2 = u[1], &w3 = u[2];
        return volume(3, 1.0 / (2.0 * (w1 - w2) * (w1 - w3) * (w2 - w3)));
    });
    e.golden.thetaAnchor = "derived";

    e.sampler = boxSampler(3, -2.0, 2.0, [](const Point& w) {
        return std::abs(w(0) - w(1)) >= 0.1 && std::abs(w(0) - w(2)) >= 0.1 && std::abs(w(1) - w(2)) >= 0.1;
    });
    e.flowTestPoint = (Point(3) << 0.3, -0.4, 1.1).finished();
    return e;
}

ExampleBundle loadExample(const std::string& id) {
    if (id == "schwarz") return makeSchwarz();
    if (id == "dbh") return loadDbh(0.0, 0.0, 0.0);
    if (id == "control5") return makeControl();
    if (id == "dqho") return makeDqho();
    if (id == "osc_spin") return makeOscSpin();
    if (id == "r8_volume") return makeR8();
    throw Error(ErrorCode::UnknownEntity, "unknown example \"" + id + "\"");
}

SchwarzReduced schwarzReduced() {
    const auto B = schwarzBase();
    SchwarzReduced r;
    r.bundle.name = "schwarz_reduced";
    r.bundle.system.basis = FieldFamily("V_S_bar", schwarzReducedFields());
    r.bundle.system.coefficients = TimeCoefficients::constants({-0.25, 0.0, 1.0});
    r.bundle.theta = schwarzReducedForm();
    const auto& X = r.bundle.system.basis;
    r.hamiltonianForms = {
        {X[0], form(B, 0, "h1", [](const auto& y) { return scalarForm(2, -y[0]); })},
        {X[1], form(B, 0, "h2", [](const auto& y) { return scalarForm(2, -0.5 * y[0] * y[1]); })},
        {X[2], form(B, 0, "h3", [](const auto& y) { return scalarForm(2, 0.5 * (y[1] - 0.5 * y[0] * y[1] * y[1])); })}};
    r.equilibria = {{"Schwarz reduced equilibria"},
                    {-0.25, 0.0, 1.0},
                    {(Point(2) << 1.2, 0.9).finished(), (Point(2) << -0.8, -1.1).finished()},
                    {(Point(2) << 1.0, 1.0).finished(), (Point(2) << -1.0, -1.0).finished()},
                    {-1.0, 1.0}};
    r.hamiltonian = [](const Point& y) { return y(1) / 2 - y(0) * y(1) * y(1) / 4 + y(0) / 4; };
    return r;
}

namespace {

constexpr double kStructureTolerance = 1e-9;
constexpr double kGoldenTolerance = 1e-8;
constexpr double kVolumeTolerance = 1e-9;

std::vector<Point> projectAll(const SmoothMap& pi, const std::vector<Point>& xs) {
    std::vector<Point> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(pi(x));
    return out;
}

double coframeResidual(const FieldFamily& f, const GoldenCoframe& c, const std::vector<Point>& pts) {
    double worst = 0.0;
    for (const auto& x : pts) {
        const auto eta = dualCoframe(f, x);
        for (std::size_t i = 0; i < eta.size() && i < c.eta.size(); ++i) worst = std::max(worst, maxAbs(eta[i] - c.eta[i](x)));
    }
    return worst;
}

void checkScheme(Report& rep, const ExampleBundle& e, const ReductionScheme& s, const std::vector<Point>& samples) {
    const std::string p = "scheme:" + s.name + "/";
    const auto base = projectAll(s.quotient.projection, samples);
    rep.append(verifyQuotient(s.quotient, base, samples), p + "quotient/");
    rep.append(verifyReductionScheme(s, samples), p);
    const SchemeGolden* g = e.schemeGolden(s.name);
    try {
        const auto red = reduceForm(s, base);
        rep.add(p + "fiber_form", red.fiberResidual, kFiberTolerance);
        rep.add(p + "pullback_consistency", maxAbsDifference(pullback(s.quotient.projection, red.form), s.noetherForm(), samples),
                kGoldenTolerance);
        if (g) rep.add(p + "reduced_form", maxAbsDifference(red.form, g->reducedForm, base), kGoldenTolerance, g->anchor);
    } catch (const Error& err) {
        rep.addFlag(p + "reduced_form", false, err.what());
    }

    const auto& basis = e.bundle.basis();
    std::vector<VectorField> projected;
    for (int a = 0; a < basis.size(); ++a) {
        const auto& X = basis[static_cast<std::size_t>(a)];
        try {
            const auto pf = projectField(X, s.quotient, base);
            rep.add(p + "fiber_field:" + X.name(), pf.wellDefResidual, kFiberTolerance);
            if (g && static_cast<std::size_t>(a) < g->reducedFields.size()) {
                const auto& want = g->reducedFields[static_cast<std::size_t>(a)];
                const double r = want ? maxAbsDifference(pf.field, *want, base) : maxAbsOver(pf.field, base);
                rep.add(p + "reduced_field:" + X.name(), r, kGoldenTolerance, g->anchor);
            }
            projected.push_back(pf.field);
        } catch (const Error& err) {
            rep.addFlag(p + "reduced_field:" + X.name(), false, err.what());
        }
    }
    if (g && g->reducedStructureMatches && static_cast<int>(projected.size()) == basis.size()) {
        const auto orig = structureConstants(basis, samples);
        const auto red = structureConstants(FieldFamily(s.name + "_reduced", projected), base);
        rep.add(p + "reduced_structure", maxDifference(red, orig), kStructureTolerance);
    }
    try {
        const auto rs = reduceSystem(e.bundle, s, samples, base);
        rep.append(validateSystem(rs.system, base), p + "reduced/");
    } catch (const Error& err) {
        rep.addFlag(p + "reduced/system", false, err.what());
    }
}

void checkReconstruction(Report& rep, const ExampleBundle& e, const std::vector<Point>& samples) {
    std::vector<QuotientChart> qs;
    std::vector<ReducedInvariant> inv;
    std::vector<std::vector<VectorField>> projected(static_cast<std::size_t>(e.bundle.basis().size()));
    for (const auto& name : e.reconstruction) {
        const auto& s = e.scheme(name);
        qs.push_back(s.quotient);
        const auto base = projectAll(s.quotient.projection, samples);
        inv.push_back({reduceForm(s, base).form, s.w, s.quotient});
        for (int a = 0; a < e.bundle.basis().size(); ++a)
            projected[static_cast<std::size_t>(a)].push_back(
                projectField(e.bundle.basis()[static_cast<std::size_t>(a)], s.quotient, base).field);
    }
    int worstKernel = 0;
    for (const auto& g : samples) worstKernel = std::max(worstKernel, kernelIntersectionDim(qs, g));
    rep.add("reconstruct/kernel_dim", worstKernel, 0.0);
    if (worstKernel == 0) {
        double worst = 0.0;
        for (const auto& g : samples)
            for (int a = 0; a < e.bundle.basis().size(); ++a) {
                const auto r = reconstructField(projected[static_cast<std::size_t>(a)], qs, g);
                worst = std::max(worst, (r.value - e.bundle.basis()[static_cast<std::size_t>(a)](g)).cwiseAbs().maxCoeff());
            }
        rep.add("reconstruct/fields", worst, kGoldenTolerance);
    }
    const int ell = e.bundle.theta.degree();
    std::vector<MultiVectorField> Z;
    for (const auto& i : inv) Z.push_back(i.Z);
    int worstAnn = 0;
    for (const auto& g : samples) worstAnn = std::max(worstAnn, annihilatorIntersectionDim(Z, ell, g).dim);
    rep.add("reconstruct/annihilator_dim", worstAnn, 0.0);
    if (worstAnn == 0) {
        double worst = 0.0;
        for (const auto& g : samples) {
            const auto r = reconstructForm(inv, ell, g);
            worst = std::max(worst, maxAbs(r.value - e.bundle.theta(g)));
        }
        rep.add("reconstruct/theta", worst, kGoldenTolerance);
    }
}

}  // namespace

Report goldenCheck(const std::string& id, unsigned long seed, int count) {
    const auto e = loadExample(id);
    const auto samples = e.samples(count, seed);
    const auto& basis = e.bundle.basis();
    Report rep;

    const auto sc = structureConstants(basis, samples);
    rep.add("structure_constants", maxDifference(sc, structureConstantsFromTable(basis.size(), e.golden.brackets.entries)),
            kStructureTolerance, e.golden.brackets.anchor);
    if (e.golden.symmetryBrackets) {
        const auto ss = structureConstants(e.symmetries, samples);
        rep.add("symmetry_structure_constants",
                maxDifference(ss, structureConstantsFromTable(e.symmetries.size(), e.golden.symmetryBrackets->entries)),
                kStructureTolerance, e.golden.symmetryBrackets->anchor);
    }
    for (const auto& Y : e.symmetries.fields)
        rep.add("symmetry:" + Y.name(), lieSymmetryResidual(Y, basis, samples), kSymmetryTolerance);

    rep.append(validateSystem(e.bundle, samples), "validate/");
    rep.add("theta_closed_form", maxAbsDifference(e.bundle.theta, e.golden.theta, samples), kVolumeTolerance, e.golden.thetaAnchor);
    if (e.bundle.theta.degree() == basis.dim() && basis.size() == basis.dim())
        rep.add("invariant_volume", maxAbsDifference(invariantVolume(basis), e.golden.theta, samples), kVolumeTolerance,
                e.golden.thetaAnchor);
    for (const auto& [pair, anchor] : e.golden.hamiltonianForms)
        rep.add("hamiltonian_form:" + pair.field.name(), verifyHamiltonianForm(pair, e.bundle.theta, samples), kGoldenTolerance,
                anchor);
    if (e.golden.coframe) {
        const auto& c = *e.golden.coframe;
        rep.add("coframe", coframeResidual(basis, c, c.exactAt.empty() ? samples : c.exactAt), kVolumeTolerance, c.anchor);
    }

    for (const auto& s : e.schemes) checkScheme(rep, e, s, samples);

    if (!e.symmetries.fields.empty() && e.symmetries.size() == e.bundle.theta.degree()) {
        rep.add("noether_spread", noetherSpread(e.symmetries, e.bundle.theta, samples), kVolumeTolerance);
        if (e.golden.noetherValue) {
            const auto J = contractField(MultiVectorField::wedgeOf(e.symmetries.fields), e.bundle.theta);
            double worst = 0.0;
            for (const auto& x : samples) worst = std::max(worst, std::abs(J(x)[0] - *e.golden.noetherValue));
            rep.add("noether_value", worst, kVolumeTolerance);
        }
    }
    if (!e.reconstruction.empty()) {
        Report rec;
        checkReconstruction(rec, e, samples);
        // A single projection is not expected to recover the fields.
        for (const auto& c : rec.checks()) {
            if (e.reconstruction.size() == 1 && c.name == "reconstruct/kernel_dim") continue;
            rep.add(c.name, c.residual, c.tol, c.detail);
        }
    }
    return rep;
}

}  // namespace mslie
