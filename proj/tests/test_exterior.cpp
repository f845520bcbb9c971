#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "mslie/exterior.hpp"

using namespace mslie;

namespace {

// Oracle: a k-form evaluated on k vectors, sum_I a_I det(V[I,:]).
double evalForm(const AlternatingTensor& a, const std::vector<Eigen::VectorXd>& vs) {
    const int k = a.degree();
    if (k == 0) return a[0];
    const auto& idx = multiIndices(a.dim(), k);
    double s = 0.0;
    for (std::size_t r = 0; r < idx.size(); ++r) {
        Eigen::MatrixXd m(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) m(i, j) = vs[static_cast<std::size_t>(j)](idx[r][static_cast<std::size_t>(i)]);
        s += a[r] * m.determinant();
    }
    return s;
}

int permutationSign(const std::vector<int>& p) {
    int s = 1;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

// Oracle: (a^b)(v) = 1/(p!q!) sum_sigma sign(sigma) a(v_sigma...) b(v_sigma...).
double evalWedgeOracle(const AlternatingTensor& a, const AlternatingTensor& b, const std::vector<Eigen::VectorXd>& vs) {
    const int p = a.degree(), q = b.degree();
    std::vector<int> perm(static_cast<std::size_t>(p + q));
    std::iota(perm.begin(), perm.end(), 0);
    double s = 0.0;
    do {
        std::vector<Eigen::VectorXd> va, vb;
        for (int i = 0; i < p; ++i) va.push_back(vs[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
        for (int i = p; i < p + q; ++i) vb.push_back(vs[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
        s += permutationSign(perm) * evalForm(a, va) * evalForm(b, vb);
    } while (std::next_permutation(perm.begin(), perm.end()));
    double fact = 1.0;
    for (int i = 2; i <= p; ++i) fact *= i;
    for (int i = 2; i <= q; ++i) fact *= i;
    return s / fact;
}

AlternatingTensor randomTensor(std::mt19937& rng, int n, int k, Variance v) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    AlternatingTensor t(n, k, v);
    for (auto& c : t.coeffs()) c = u(rng);
    return t;
}

Eigen::VectorXd randomVector(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = u(rng);
    return v;
}

AlternatingTensor vec(const Eigen::VectorXd& v) {
    return AlternatingTensor::fromComponents(std::vector<double>(v.data(), v.data() + v.size()), Variance::Contravariant);
}

}  // namespace

TEST_CASE("multi-index tables are complete and ranked consistently") {
    for (int n = 0; n <= 8; ++n)
        for (int k = 0; k <= n; ++k) {
            const auto& idx = multiIndices(n, k);
            CHECK(idx.size() == binomial(n, k));
            for (std::size_t r = 0; r < idx.size(); ++r) {
                CHECK(isStrictlyIncreasing(idx[r]));
                CHECK(rankOf(idx[r]) == r);
            }
        }
    CHECK(binomial(16, 8) == 12870);
}

TEST_CASE("wedge agrees with the permutation-sum oracle") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 5;
        const int p = static_cast<int>(rng() % 3), q = static_cast<int>(rng() % 3);
        const auto a = randomTensor(rng, n, p, Variance::Covariant);
        const auto b = randomTensor(rng, n, q, Variance::Covariant);
        std::vector<Eigen::VectorXd> vs;
        for (int i = 0; i < p + q; ++i) vs.push_back(randomVector(rng, n));
        CHECK(evalForm(wedge(a, b), vs) == doctest::Approx(evalWedgeOracle(a, b, vs)).epsilon(1e-12));
    }
}

TEST_CASE("wedge is associative and graded anticommutative") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 6;
        const int p = static_cast<int>(rng() % 3), q = static_cast<int>(rng() % 3), r = static_cast<int>(rng() % 3);
        const auto a = randomTensor(rng, n, p, Variance::Covariant);
        const auto b = randomTensor(rng, n, q, Variance::Covariant);
        const auto c = randomTensor(rng, n, r, Variance::Covariant);
        CHECK(maxAbs(wedge(wedge(a, b), c) - wedge(a, wedge(b, c))) < 1e-12);
        const double sign = ((p * q) % 2 == 0) ? 1.0 : -1.0;
        CHECK(maxAbs(wedge(a, b) - sign * wedge(b, a)) < 1e-12);
    }
}

TEST_CASE("wedge rejects mismatched inputs") {
    const auto a = AlternatingTensor::basis(3, {0}, Variance::Covariant);
    const auto b = AlternatingTensor::basis(4, {0}, Variance::Covariant);
    const auto v = AlternatingTensor::basis(3, {1}, Variance::Contravariant);
    CHECK_THROWS_AS(wedge(a, b), Error);
    CHECK_THROWS_AS(wedge(a, v), Error);
    try {
        wedge(a, v);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Variance);
    }
}

TEST_CASE("interior of a wedge feeds its factors in order") {
    // (iota_{X1^...^Xp} a)(v...) = a(X1, ..., Xp, v...)
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 5;
        const int k = 2 + static_cast<int>(rng() % 4);
        const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(k));
        const auto a = randomTensor(rng, n, k, Variance::Covariant);
        std::vector<Eigen::VectorXd> xs, vs;
        AlternatingTensor w = AlternatingTensor::unit(n, Variance::Contravariant);
        for (int i = 0; i < p; ++i) {
            xs.push_back(randomVector(rng, n));
            w = wedge(w, vec(xs.back()));
        }
        for (int i = 0; i < k - p; ++i) vs.push_back(randomVector(rng, n));
        std::vector<Eigen::VectorXd> all = xs;
        all.insert(all.end(), vs.begin(), vs.end());
        CHECK(evalForm(interior(w, a), vs) == doctest::Approx(evalForm(a, all)).epsilon(1e-11));
    }
}

TEST_CASE("interior of basis multivectors") {
    AlternatingTensor vol(5, 5, Variance::Covariant);
    vol.set({0, 1, 2, 3, 4}, 1.0);
    const auto w45 = AlternatingTensor::basis(5, {3, 4}, Variance::Contravariant);
    const auto r = interior(w45, vol);
    CHECK(r.get({0, 1, 2}) == 1.0);
    CHECK(maxAbs(r - AlternatingTensor::basis(5, {0, 1, 2}, Variance::Covariant)) == 0.0);

    // e^{v2} d1^d2^d3 into e^{-v2} cos v5 dv1..dv6 gives cos v5 dv4^dv5^dv6
    const double v2 = 0.37, v5 = -0.81;
    AlternatingTensor theta(6, 6, Variance::Covariant);
    theta.set({0, 1, 2, 3, 4, 5}, std::exp(-v2) * std::cos(v5));
    const auto w123 = std::exp(v2) * AlternatingTensor::basis(6, {0, 1, 2}, Variance::Contravariant);
    const auto r123 = interior(w123, theta);
    CHECK(r123.get({3, 4, 5}) == doctest::Approx(std::cos(v5)).epsilon(1e-14));
    CHECK(maxAbs(r123) == doctest::Approx(std::abs(std::cos(v5))));
    const auto w456 = (1.0 / std::cos(v5)) * AlternatingTensor::basis(6, {3, 4, 5}, Variance::Contravariant);
    CHECK(interior(w456, theta).get({0, 1, 2}) == doctest::Approx(-std::exp(-v2)).epsilon(1e-14));

    CHECK_THROWS_AS(interior(AlternatingTensor::basis(4, {0, 1, 2}, Variance::Contravariant),
                             AlternatingTensor::basis(4, {0, 1}, Variance::Covariant)),
                    Error);
}

TEST_CASE("annihilator dimensions match subset counting") {
    // iota_{d_J} kills dx^I unless J is a subset of I, so rank = C(n-p, ell-p).
    CHECK(annihilator(AlternatingTensor::basis(2, {0}, Variance::Contravariant), 1).size() == 1);
    const auto ann = annihilator(AlternatingTensor::basis(2, {0}, Variance::Contravariant), 1);
    CHECK(std::abs(ann[0].get({1})) == doctest::Approx(1.0));
    CHECK(std::abs(ann[0].get({0})) < 1e-14);

    for (int n = 2; n <= 8; ++n)
        for (int p = 1; p <= 3 && p <= n; ++p)
            for (int ell = p; ell <= n; ++ell) {
                MultiIndex J(static_cast<std::size_t>(p));
                std::iota(J.begin(), J.end(), 0);
                const auto w = AlternatingTensor::basis(n, J, Variance::Contravariant);
                const std::size_t expected = binomial(n, ell) - binomial(n - p, ell - p);
                CHECK(annihilator(w, ell).size() == expected);
            }
    CHECK(annihilator(AlternatingTensor::basis(8, {0, 1}, Variance::Contravariant), 6).size() == 13);
    CHECK(annihilator(AlternatingTensor(8, 2, Variance::Contravariant), 6).size() == 28);
}

TEST_CASE("annihilator plus rank equals C(n, ell) for random multivectors") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 6;
        const int p = 1 + static_cast<int>(rng() % 3);
        const int ell = p + static_cast<int>(rng() % static_cast<unsigned>(n - p + 1));
        const auto w = randomTensor(rng, n, p, Variance::Contravariant);
        const Eigen::MatrixXd m = contractionMatrix(w, ell);
        const auto ns = nullSpace(m);
        CHECK(annihilator(w, ell).size() + static_cast<std::size_t>(ns.rank) == binomial(n, ell));
        for (const auto& a : annihilator(w, ell)) CHECK(maxAbs(interior(w, a)) < 1e-12);
    }
}

TEST_CASE("triple annihilator intersection in R^8 is trivial") {
    const auto za = AlternatingTensor::basis(8, {0, 1}, Variance::Contravariant);
    const auto zb = AlternatingTensor::basis(8, {3, 4}, Variance::Contravariant);
    const auto zc = AlternatingTensor::basis(8, {6, 7}, Variance::Contravariant);
    Eigen::MatrixXd stacked(3 * 70, 28);
    stacked << contractionMatrix(za, 6), contractionMatrix(zb, 6), contractionMatrix(zc, 6);
    CHECK(nullSpace(stacked).basis.cols() == 0);
    Eigen::MatrixXd pair(2 * 70, 28);
    pair << contractionMatrix(za, 6), contractionMatrix(zb, 6);
    // forms containing neither {1,2} nor {4,5}: a 6-subset of 8 misses two indices, one from each pair
    CHECK(nullSpace(pair).basis.cols() == 4);
}

TEST_CASE("nondegeneracy order") {
    CHECK(nondegeneracyOrder(AlternatingTensor::basis(2, {0, 1}, Variance::Covariant), 3) == 1);
    CHECK(nondegeneracyOrder(AlternatingTensor::basis(4, {0, 1, 2}, Variance::Covariant), 3) == 0);
    AlternatingTensor omega(8, 6, Variance::Covariant);
    for (auto& c : omega.coeffs()) c = 1.0;
    CHECK(nondegeneracyOrder(omega, 3) == 3);
    CHECK(nondegeneracyOrder(omega, 1) == 1);
    AlternatingTensor vol(4, 4, Variance::Covariant);
    vol[0] = 2.0;
    CHECK(nondegeneracyOrder(vol, 4) == 3);
}

TEST_CASE("pointwise pullback agrees with evaluation on pushed vectors") {
    std::mt19937 rng(9);
    const auto a = randomTensor(rng, 4, 2, Variance::Covariant);
    Eigen::MatrixXd J = Eigen::MatrixXd::Random(4, 3);
    const auto v1 = randomVector(rng, 3), v2 = randomVector(rng, 3);
    const Eigen::VectorXd w1 = J * v1, w2 = J * v2;
    CHECK(evalForm(pullbackAt(a, J), {v1, v2}) == doctest::Approx(evalForm(a, {w1, w2})).epsilon(1e-12));
    // push a bivector forward and contract: iota_{J w} a = iota_w (J^* a)
    const auto w = wedge(vec(v1), vec(v2));
    CHECK(interior(pushforwardAt(w, J), a)[0] == doctest::Approx(interior(w, pullbackAt(a, J))[0]).epsilon(1e-12));
}
