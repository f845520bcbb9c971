#include <cmath>

#include "doctest.h"
#include "mslie/gallery.hpp"

using namespace mslie;

namespace {

Point pt(std::initializer_list<double> v) { return toPoint(std::vector<double>(v)); }

std::vector<Point> projectAll(const SmoothMap& pi, const std::vector<Point>& xs) {
    std::vector<Point> out;
    for (const auto& x : xs) out.push_back(pi(x));
    return out;
}

void checkAgainstGolden(const std::string& id, const std::string& scheme) {
    CAPTURE(id);
    CAPTURE(scheme);
    const auto e = loadExample(id);
    const auto& s = e.scheme(scheme);
    const auto* g = e.schemeGolden(scheme);
    REQUIRE(g);
    const auto total = e.samples(50);
    const auto base = projectAll(s.quotient.projection, total);

    const auto rep = verifyReductionScheme(s, total);
    for (const auto& f : rep.failures()) FAIL_CHECK(f);

    const auto red = reduceForm(s, base);
    CHECK(red.fiberResidual < 1e-6);
    CHECK(maxAbsDifference(red.form, g->reducedForm, base) < 1e-8);
    for (int a = 0; a < e.bundle.basis().size(); ++a) {
        const auto& X = e.bundle.basis()[static_cast<std::size_t>(a)];
        CAPTURE(X.name());
        const auto pf = projectField(X, s.quotient, base);
        CHECK(pf.wellDefResidual < 1e-6);
        const auto& want = g->reducedFields[static_cast<std::size_t>(a)];
        if (want)
            CHECK(maxAbsDifference(pf.field, *want, base) < 1e-8);
        else
            CHECK(maxAbsOver(pf.field, base) < 1e-12);
    }
}

}  // namespace

TEST_CASE("reduced forms and fields match the displayed ones") {
    checkAgainstGolden("schwarz", "y2");
    checkAgainstGolden("control5", "y45");
    checkAgainstGolden("dqho", "sl123");
    checkAgainstGolden("dqho", "h456");
    checkAgainstGolden("osc_spin", "sl123");
    checkAgainstGolden("osc_spin", "so456");
    checkAgainstGolden("r8_volume", "zb");
}

TEST_CASE("reduced data at hand-picked points") {
    const auto sch = loadExample("schwarz");
    const auto& y2 = sch.scheme("y2");
    const Point y = pt({1.5, -0.5});
    CHECK(reduceForm(y2, {y}).form(y)[0] == doctest::Approx(0.5).epsilon(1e-14));
    const auto X3 = projectField(sch.bundle.basis()[2], y2.quotient, {y}).field;
    CHECK(X3(y)(0) == doctest::Approx(1.75).epsilon(1e-13));
    CHECK(X3(y)(1) == doctest::Approx(0.125).epsilon(1e-13));
    // the reduced form does not depend on which point of the fiber it is read from
    const Point x = pt({1.5 * 2.0, 2.0, -0.5 * 2.0});
    const auto iw = y2.noetherForm()(x);
    const auto J = y2.quotient.projection.jacobian(x);
    // dxbar ^ dabar pulled back by pi, times 1/2
    const auto pulled = pullbackAt(reduceForm(y2, {y}).form(y), J);
    CHECK(maxAbs(pulled - iw) < 1e-13);
    CHECK(maxAbs(momentumMap(x, y2.w, y2.theta) - iw) == 0.0);

    const auto os = loadExample("osc_spin");
    const Point b = pt({0.3, 0.5, -0.2});
    CHECK(reduceForm(os.scheme("sl123"), {b}).form(b)[0] == doctest::Approx(std::cos(0.5)).epsilon(1e-13));
    CHECK(reduceForm(os.scheme("so456"), {b}).form(b)[0] == doctest::Approx(-std::exp(-0.5)).epsilon(1e-13));
}

TEST_CASE("a non-unimodular symmetry family is rejected") {
    // {d/dx, x d/dx - y d/dy} on R^3: [Y1, Y2] = Y1, Tr ad Y2 = -1, both divergence free
    const auto M = makeChart(3, "x,y,z", [](const Point& p) { return std::abs(p(1)) > 1e-9; });
    const auto B = makeChart(1, "z");
    const auto Y1 = VectorField::coordinate(M, 0);
    const auto Y2 = VectorField::fromFormula(M, "x dx - y dy", [](const auto& u) {
        using T = std::decay_t<decltype(u[0])>;
        return std::vector<T>{u[0], -u[1], T(0.0)};
    });
    AlternatingTensor vol(3, 3, Variance::Covariant);
    vol[0] = 1.0;
    const auto theta = DifferentialForm::constant(M, vol, "vol");
    const auto pi = SmoothMap::fromFormula(M, B, "z", [](const auto& u) { return std::vector{u[2]}; });
    const auto sigma = SmoothMap::fromFormula(B, M, "s", [](const auto& y) {
        using T = std::decay_t<decltype(y[0])>;
        return std::vector<T>{T(0.0), T(1.0), y[0]};
    });
    ReductionScheme s{"affine", FieldFamily("aff", {Y1, Y2}), MultiVectorField::wedgeOf({Y1, Y2}), theta, {"affine", pi, sigma, {Y1, Y2}}};
    std::vector<Point> samples = {pt({0.3, 1.0, 0.2}), pt({-0.5, -0.7, 1.1}), pt({1.2, 0.4, -0.3})};
    const auto rep = verifyReductionScheme(s, samples);
    REQUIRE(rep.find("unimodular"));
    CHECK_FALSE(rep.find("unimodular")->pass);
    // i_w vol = -y dz is not invariant under Y2
    CHECK_FALSE(rep.find("(b) invariant")->pass);
    CHECK(rep.find("(a) horizontal")->pass);
    CHECK_FALSE(rep.allPass());
}

TEST_CASE("non-basic forms and non-projectable fields raise errors") {
    const auto e = loadExample("schwarz");
    auto s = e.scheme("y2");
    const auto base = projectAll(s.quotient.projection, e.samples(10));
    const auto dv = VectorField::coordinate(e.bundle.theta.chart(), 1);
    try {
        projectField(dv, s.quotient, base);
        FAIL("expected NotProjectable");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::NotProjectable);
    }
    AlternatingTensor vol(3, 3, Variance::Covariant);
    vol[0] = 1.0;
    s.theta = DifferentialForm::constant(e.bundle.theta.chart(), vol, "vol");
    try {
        reduceForm(s, base);
        FAIL("expected NotBasic");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::NotBasic);
        CHECK(std::string(err.what()).find("is not basic") != std::string::npos);
    }
}

TEST_CASE("a section that does not invert the projection is reported") {
    const auto e = loadExample("schwarz");
    auto q = e.scheme("y2").quotient;
    q.section = SmoothMap::fromFormula(q.base(), q.total(), "bad", [](const auto& y) {
        using T = std::decay_t<decltype(y[0])>;
        return std::vector<T>{y[0], T(2.0), y[1]};
    });
    const auto total = e.samples(10);
    const auto rep = verifyQuotient(q, projectAll(q.projection, total), total);
    CHECK_FALSE(rep.find("projection_section_identity")->pass);
    CHECK(rep.find("fiber_in_kernel")->pass);
}

TEST_CASE("reduceSystem keeps the fields that survive projection") {
    const auto sch = loadExample("schwarz");
    const auto total = sch.samples(30);
    const auto& y2 = sch.scheme("y2");
    const auto r = reduceSystem(sch.bundle, y2, total, projectAll(y2.quotient.projection, total));
    CHECK(r.kept == std::vector<int>{0, 1, 2});
    CHECK(r.system.system.coefficients.size() == 3);
    CHECK(r.fiberResidual < 1e-6);

    const auto os = loadExample("osc_spin");
    const auto ts = os.samples(30);
    const auto& sl = os.scheme("sl123");
    const auto ro = reduceSystem(os.bundle, sl, ts, projectAll(sl.quotient.projection, ts));
    CHECK(ro.kept == std::vector<int>{3, 4, 5});
    CHECK(ro.system.system.coefficients.size() == 3);
    CHECK(ro.system.system.coefficients[1](0.7) == os.bundle.system.coefficients[4](0.7));
}

TEST_CASE("equilibria of the reduced Schwarz system are saddles") {
    const auto r = schwarzReduced();
    const auto X = r.bundle.system.at(0.0, TimeCoefficients::constants(r.equilibria.coefficients));
    const auto eq = relativeEquilibria(X, r.equilibria.guesses);
    REQUIRE(eq.size() == 2);
    for (std::size_t i = 0; i < eq.size(); ++i) {
        CAPTURE(i);
        CHECK(eq[i].converged);
        CHECK((eq[i].point - r.equilibria.points[i]).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(X(eq[i].point).norm() < 1e-12);
        // finite-difference Jacobian oracle
        const double h = 1e-6;
        Eigen::Matrix2d J;
        for (int j = 0; j < 2; ++j) {
            Point e = Point::Zero(2);
            e(j) = h;
            J.col(j) = (X(eq[i].point + e) - X(eq[i].point - e)) / (2 * h);
        }
        Eigen::EigenSolver<Eigen::Matrix2d> es(J);
        std::vector<double> ev = {es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
        std::sort(ev.begin(), ev.end());
        REQUIRE(eq[i].eigenvalues.size() == 2);
        for (int k = 0; k < 2; ++k) {
            CHECK(std::abs(eq[i].eigenvalues[static_cast<std::size_t>(k)].real() - ev[static_cast<std::size_t>(k)]) < 1e-6);
            CHECK(std::abs(eq[i].eigenvalues[static_cast<std::size_t>(k)].real() - r.equilibria.eigenvalues[static_cast<std::size_t>(k)]) < 1e-6);
        }
    }
    // at (1,1) the Jacobian is [[-1,-1],[0,1]]
    const auto J = X.jacobian(pt({1.0, 1.0}));
    CHECK(std::abs(J(0, 0) + 1.0) < 1e-14);
    CHECK(std::abs(J(0, 1) + 1.0) < 1e-14);
    CHECK(std::abs(J(1, 0)) < 1e-14);
    CHECK(std::abs(J(1, 1) - 1.0) < 1e-14);
}

TEST_CASE("relative equilibria lift to points that still move") {
    const auto sch = loadExample("schwarz");
    const auto r = schwarzReduced();
    const auto& q = sch.scheme("y2").quotient;
    const auto Xamb = sch.bundle.system.at(0.0, TimeCoefficients::constants(r.equilibria.coefficients));
    for (const auto& y : r.equilibria.points) {
        const Point g = q.section(y);
        CHECK(std::abs(g(1) - 1.0) < 1e-15);
        const Point v = Xamb(g);
        CHECK(v.norm() > 0.5);
        CHECK((q.projection.jacobian(g) * v).norm() < 1e-12);
    }
    CHECK((q.section(pt({-1.0, -1.0})) - pt({-1.0, 1.0, -1.0})).norm() == 0.0);
}
