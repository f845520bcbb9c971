#include <cmath>

#include "doctest.h"
#include "mslie/gallery.hpp"

using namespace mslie;

namespace {

std::vector<Point> projectAll(const SmoothMap& pi, const std::vector<Point>& xs) {
    std::vector<Point> out;
    for (const auto& x : xs) out.push_back(pi(x));
    return out;
}

struct Pieces {
    std::vector<QuotientChart> quotients;
    std::vector<ReducedInvariant> invariants;
    std::vector<std::vector<VectorField>> projected;  // per basis field, one per scheme
};

Pieces piecesFor(const ExampleBundle& e, const std::vector<std::string>& names, const std::vector<Point>& total) {
    Pieces p;
    p.projected.resize(static_cast<std::size_t>(e.bundle.basis().size()));
    for (const auto& n : names) {
        const auto& s = e.scheme(n);
        const auto base = projectAll(s.quotient.projection, total);
        p.quotients.push_back(s.quotient);
        p.invariants.push_back({reduceForm(s, base).form, s.w, s.quotient});
        for (std::size_t a = 0; a < p.projected.size(); ++a)
            p.projected[a].push_back(projectField(e.bundle.basis()[a], s.quotient, base).field);
    }
    return p;
}

}  // namespace

TEST_CASE("oscillator-spin system is recovered from its two reductions") {
    const auto e = loadExample("osc_spin");
    const auto total = e.samples(50);
    const auto p = piecesFor(e, {"sl123", "so456"}, total);
    double fieldErr = 0.0, formErr = 0.0;
    for (const auto& g : total) {
        CHECK(kernelIntersectionDim(p.quotients, g) == 0);
        for (std::size_t a = 0; a < p.projected.size(); ++a) {
            const auto r = reconstructField(p.projected[a], p.quotients, g);
            fieldErr = std::max(fieldErr, (r.value - e.bundle.basis()[a](g)).cwiseAbs().maxCoeff());
        }
        const auto th = reconstructForm(p.invariants, 6, g);
        CHECK_FALSE(th.mixedDegrees);
        formErr = std::max(formErr, std::abs(th.value[0] - std::exp(-g(1)) * std::cos(g(4))));
    }
    CHECK(fieldErr < 1e-8);
    CHECK(formErr < 1e-8);

    // the time-dependent system at a given t
    std::vector<LieSystem> reduced;
    const auto base0 = projectAll(p.quotients[0].projection, total);
    const auto base1 = projectAll(p.quotients[1].projection, total);
    reduced.push_back(reduceSystem(e.bundle, e.scheme("sl123"), total, base0).system.system);
    reduced.push_back(reduceSystem(e.bundle, e.scheme("so456"), total, base1).system.system);
    const double t = 0.8;
    for (int i = 0; i < 5; ++i) {
        const auto& g = total[static_cast<std::size_t>(i)];
        const auto r = reconstructField(reduced, p.quotients, g, t);
        CHECK((r.value - e.bundle.system.velocity(t, g)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("the constant 6-form on R^8 is determined by three bivector reductions") {
    const auto e = loadExample("r8_volume");
    const auto total = e.samples(10);
    const auto& za = e.scheme("za");
    const Point& g = total.front();

    // 6-forms killed by d1^d2: the 28 - C(6,4) = 13 monomials missing x1 or x2
    CHECK(annihilatorIntersectionDim({za.w}, 6, g).dim == 13);
    // a 6-subset misses two indices; killed by both when it misses one of {1,2} and one of {4,5}
    CHECK(annihilatorIntersectionDim({za.w, e.scheme("zb").w}, 6, g).dim == 4);
    CHECK(annihilatorIntersectionDim({za.w, e.scheme("zb").w, e.scheme("zc").w}, 6, g).dim == 0);

    const auto p = piecesFor(e, {"za", "zb", "zc"}, total);
    for (const auto& x : total) {
        const auto r = reconstructForm(p.invariants, 6, x);
        CHECK(r.residual < 1e-12);
        double worst = 0.0;
        for (std::size_t i = 0; i < r.value.size(); ++i) worst = std::max(worst, std::abs(r.value[i] - 1.0));
        CHECK(worst < 1e-12);
        CHECK(kernelIntersectionDim(p.quotients, x) == 0);
    }
    CHECK(nondegeneracyOrder(e.bundle.theta(g), 3) == 3);
}

TEST_CASE("reconstruction errors") {
    const auto ctl = loadExample("control5");
    const auto total = ctl.samples(5);
    const auto p = piecesFor(ctl, {"y45"}, total);
    CHECK(kernelIntersectionDim(p.quotients, total[0]) == 2);
    try {
        reconstructField(p.projected[0], p.quotients, total[0]);
        FAIL("expected Underdetermined");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::Underdetermined);
    }
    // a single 2-vector contraction is injective on top forms
    const auto th = reconstructForm(p.invariants, 5, total[0]);
    CHECK(std::abs(th.value[0] - 1.0) < 1e-12);

    const auto r8 = loadExample("r8_volume");
    const auto rs = r8.samples(3);
    auto q = piecesFor(r8, {"za", "zb", "zc"}, rs);
    try {
        reconstructForm({q.invariants[0]}, 6, rs[0]);
        FAIL("expected Insufficient");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::Insufficient);
        CHECK(std::string(err.what()).find("insufficient reductions") != std::string::npos);
    }
    // reduced fields that disagree on the shared coordinates
    auto bad = q.projected[2];
    bad[0] = 2.0 * bad[0];
    try {
        reconstructField(bad, q.quotients, rs[0]);
        FAIL("expected Incompatible");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::Incompatible);
    }
    CHECK_THROWS_AS(annihilatorIntersectionDim({r8.scheme("za").w}, 1, rs[0]), Error);
}

TEST_CASE("multivectors of different degrees are flagged") {
    const auto r8 = loadExample("r8_volume");
    const auto g = r8.samples(1).front();
    const auto one = MultiVectorField::fromVectorField(r8.symmetries[0]);
    const auto res = annihilatorIntersectionDim({one, r8.scheme("zb").w}, 6, g);
    CHECK(res.mixedDegrees);
    CHECK_FALSE(annihilatorIntersectionDim({r8.scheme("za").w, r8.scheme("zb").w}, 6, g).mixedDegrees);
}
