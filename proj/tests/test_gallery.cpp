#include <cmath>
#include <set>

#include "doctest.h"
#include "mslie/gallery.hpp"
#include "mslie/integrate.hpp"

using namespace mslie;

namespace {

Point pt(std::initializer_list<double> v) { return toPoint(std::vector<double>(v)); }

double maxVolumeError(const DifferentialForm& w, const std::vector<Point>& xs, const std::function<double(const Point&)>& c) {
    double worst = 0.0;
    for (const auto& x : xs) worst = std::max(worst, std::abs(w(x)[0] - c(x)));
    return worst;
}

}  // namespace

TEST_CASE("six examples are available and unknown ids are rejected") {
    CHECK(exampleIds().size() == 6);
    for (const auto& id : exampleIds()) CHECK(loadExample(id).id == id);
    try {
        loadExample("nosuch");
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::UnknownEntity);
    }
    CHECK_THROWS_AS(loadExample("schwarz").scheme("nosuch"), Error);
}

TEST_CASE("goldenCheck passes for every example") {
    for (const auto& id : exampleIds()) {
        CAPTURE(id);
        const auto rep = goldenCheck(id);
        for (const auto& f : rep.failures()) FAIL_CHECK(f);
        CHECK(rep.allPass());
        CHECK(rep.checks().size() > 10);
    }
    const auto ctl = goldenCheck("control5");
    REQUIRE(ctl.find("structure_constants"));
    CHECK(ctl.find("structure_constants")->pass);
    const auto os = goldenCheck("osc_spin");
    for (const char* y : {"symmetry:Y1", "symmetry:Y4", "symmetry:Y6"}) CHECK(os.find(y)->pass);
}

TEST_CASE("golden values carry an anchor") {
    for (const auto& id : exampleIds()) {
        CAPTURE(id);
        const auto e = loadExample(id);
        CHECK_FALSE(e.golden.brackets.anchor.empty());
        CHECK_FALSE(e.golden.thetaAnchor.empty());
        for (const auto& g : e.golden.reductions) {
            CHECK_FALSE(g.anchor.empty());
            CHECK(g.reducedFields.size() == static_cast<std::size_t>(e.bundle.basis().size()));
        }
        for (const auto& [p, anchor] : e.golden.hamiltonianForms) CHECK_FALSE(anchor.empty());
        // every scheme has its golden data
        for (const auto& s : e.schemes) CHECK(e.schemeGolden(s.name) != nullptr);
    }
}

TEST_CASE("dqho volume form is the standard one at the origin") {
    const auto e = loadExample("dqho");
    const auto th = e.bundle.theta(Point::Zero(6));
    CHECK(th.degree() == 6);
    CHECK(th[0] == 1.0);
}

TEST_CASE("R^8 carries three bivector schemes") {
    const auto e = loadExample("r8_volume");
    REQUIRE(e.schemes.size() == 3);
    std::set<std::string> names;
    for (const auto& s : e.schemes) {
        CHECK(s.w.degree() == 2);
        names.insert(s.name);
    }
    CHECK(names == std::set<std::string>{"za", "zb", "zc"});
    CHECK(e.bundle.theta.degree() == 6);
}

TEST_CASE("invariant volumes match the closed forms") {
    SUBCASE("dqho") {
        const auto e = loadExample("dqho");
        CHECK(maxVolumeError(invariantVolume(e.bundle.basis()), e.samples(50),
                             [](const Point& v) { return std::exp(-v(1)); }) < 1e-9);
    }
    SUBCASE("osc_spin") {
        const auto e = loadExample("osc_spin");
        CHECK(maxVolumeError(invariantVolume(e.bundle.basis()), e.samples(50),
                             [](const Point& v) { return std::exp(-v(1)) * std::cos(v(4)); }) < 1e-9);
    }
    SUBCASE("control5") {
        const auto e = loadExample("control5");
        CHECK(maxVolumeError(invariantVolume(e.bundle.basis()), e.samples(50), [](const Point&) { return 1.0; }) < 1e-9);
    }
}

TEST_CASE("DBH keeps the sl2 table for nonzero alpha") {
    const auto d0 = loadExample("dbh");
    CHECK(d0.parameters == std::vector<double>{0.0, 0.0, 0.0});
    const auto table = structureConstantsFromTable(3, {{0, 1, 0, 1.0}, {0, 2, 1, 2.0}, {1, 2, 2, 1.0}});
    const auto d = loadDbh(0.3, 0.1, 0.2);
    const auto s = d.samples(50);
    CHECK(maxDifference(structureConstants(d.bundle.basis(), s), table) < 1e-9);
    // det [X1 X2 X3] = 2 (w1-w2)(w1-w3)(w2-w3) whatever alpha is
    CHECK(maxVolumeError(d.bundle.theta, s, [](const Point& w) {
              return 1.0 / (2.0 * (w(0) - w(1)) * (w(0) - w(2)) * (w(1) - w(2)));
          }) < 1e-9);
    CHECK(validateSystem(d.bundle, s).allPass());
    // the DBH equations are -X3
    const Point w = pt({0.3, -0.4, 1.1});
    const double tau2 = 0.09 * (w(0) - w(1)) * (w(2) - w(0)) + 0.01 * (w(1) - w(2)) * (w(0) - w(1)) +
                        0.04 * (w(2) - w(0)) * (w(1) - w(2));
    const Point rhs = d.bundle.system.velocity(0.0, w);
    CHECK(rhs(0) == doctest::Approx(w(2) * w(1) - w(0) * w(2) - w(0) * w(1) + tau2).epsilon(1e-14));
    CHECK(rhs(2) == doctest::Approx(w(1) * w(0) - w(2) * w(1) - w(2) * w(0) + tau2).epsilon(1e-14));
}

TEST_CASE("reduced Schwarz data") {
    const auto r = schwarzReduced();
    CHECK(r.equilibria.points.size() == 2);
    CHECK(r.equilibria.points[0] == pt({1.0, 1.0}));
    CHECK(r.equilibria.points[1] == pt({-1.0, -1.0}));
    const auto G = CasimirTensor(r.bundle.basis());
    double worst = 0.0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) worst = std::max(worst, std::abs(G.det(pt({-2.0 + 0.4 * i, -2.0 + 0.4 * j})) + 4.0));
    CHECK(worst < 1e-10);
    // G = [[-2 xbar^2, 2], [2, 0]]
    const auto g = G.at(pt({0.5, 0.7}));
    CHECK(g(0, 0) == doctest::Approx(-0.5));
    CHECK(g(0, 1) == doctest::Approx(2.0));
    CHECK(g(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("samples are reproducible and stay in the documented boxes") {
    const auto e = loadExample("schwarz");
    const auto a = e.samples(20, 5), b = e.samples(20, 5), c = e.samples(20, 6);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    for (const auto& x : a) {
        CHECK(std::abs(x(1)) >= 0.2);
        CHECK(x.cwiseAbs().maxCoeff() <= 2.0);
    }
    const auto os = loadExample("osc_spin");
    for (const auto& x : os.samples(50)) CHECK(std::abs(std::cos(x(4))) >= 0.2);
}

TEST_CASE("every certified symmetry commutes with the preset flow") {
    for (const auto& id : exampleIds()) {
        CAPTURE(id);
        const auto e = loadExample(id);
        for (const auto& Y : e.symmetries.fields) {
            CAPTURE(Y.name());
            CHECK(symmetryFlowTest(e.bundle.system, e.bundle.system.coefficients, Y, e.flowTestPoint, 0.5, 0.0, 5.0) < 1e-6);
        }
    }
}
