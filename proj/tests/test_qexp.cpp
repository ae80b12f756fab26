#include <cmath>
#include <random>

#include "doctest.h"
#include "fdr/qexp.hpp"
#include "oracle_helpers.hpp"

using fdr::ClosureBasis;
using fdr::QETerm;
using fdr::QuasiExponential;

namespace {

QuasiExponential random_qexp(std::mt19937_64& rng, double alpha) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> nterms(1, 3);
    std::uniform_int_distribution<int> degree(0, 2);
    std::vector<QETerm> terms;
    const int k = nterms(rng);
    for (int i = 0; i < k; ++i) {
        QETerm t;
        t.rate = alpha / 2.0 + 0.1 + 3.0 * unif(rng);
        const int d = degree(rng);
        for (int j = 0; j <= d; ++j) t.coeffs.push_back(2.0 * unif(rng) - 1.0);
        if (std::abs(t.coeffs.back()) < 0.1) t.coeffs.back() = 0.5;
        terms.push_back(t);
    }
    return QuasiExponential(2.0 * unif(rng) - 1.0, terms);
}

}  // namespace

TEST_CASE("evaluate: exponential at origin") {
    auto h = QuasiExponential::exponential(1.0);
    CHECK(h(0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("evaluate: zero factor at origin") {
    auto h = QuasiExponential::monomial_exp(0.7, 1);
    CHECK(h(0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("evaluate: 1 + e^{-2y} at ln 2") {
    // direct arithmetic: 1 + exp(-2 ln 2) = 1 + 1/4
    auto h = QuasiExponential::constant_fn(1.0) + QuasiExponential::exponential(2.0);
    CHECK(h(std::log(2.0)) == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("differentiate: eigenfunction") {
    const double a = 1.3;
    auto d = QuasiExponential::exponential(a).derivative();
    REQUIRE(d.terms().size() == 1);
    CHECK(d.constant() == 0.0);
    CHECK(d.terms()[0].rate == doctest::Approx(a));
    REQUIRE(d.terms()[0].coeffs.size() == 1);
    CHECK(d.terms()[0].coeffs[0] == doctest::Approx(-a).epsilon(1e-15));
}

TEST_CASE("differentiate: y e^{-ay} -> e^{-ay} - a y e^{-ay}") {
    const double a = 0.8;
    auto d = QuasiExponential::monomial_exp(a, 1).derivative();
    REQUIRE(d.terms().size() == 1);
    REQUIRE(d.terms()[0].coeffs.size() == 2);
    CHECK(d.terms()[0].coeffs[0] == doctest::Approx(1.0));
    CHECK(d.terms()[0].coeffs[1] == doctest::Approx(-a));
}

TEST_CASE("differentiate: constants vanish") {
    auto d = QuasiExponential::constant_fn(3.5).derivative();
    CHECK(d.is_zero());
}

TEST_CASE("differentiate is linear on coefficients") {
    std::mt19937_64 rng(12345);
    for (int rep = 0; rep < 20; ++rep) {
        auto h1 = random_qexp(rng, 1.0);
        auto h2 = random_qexp(rng, 1.0);
        const double c1 = 1.75, c2 = -0.4;
        auto lhs = (c1 * h1 + c2 * h2).derivative();
        auto rhs = c1 * h1.derivative() + c2 * h2.derivative();
        // exact equality of canonical coefficient vectors, up to canonical drops
        for (double y : {0.0, 0.3, 1.1, 4.2}) CHECK(lhs(y) == doctest::Approx(rhs(y)).epsilon(1e-13));
        REQUIRE(lhs.terms().size() == rhs.terms().size());
        for (size_t t = 0; t < lhs.terms().size(); ++t) {
            REQUIRE(lhs.terms()[t].coeffs.size() == rhs.terms()[t].coeffs.size());
            for (size_t k = 0; k < lhs.terms()[t].coeffs.size(); ++k)
                CHECK(lhs.terms()[t].coeffs[k] == doctest::Approx(rhs.terms()[t].coeffs[k]).epsilon(1e-14));
        }
    }
}

TEST_CASE("h_alpha_norm: constant") {
    CHECK(fdr::h_alpha_norm(QuasiExponential::constant_fn(-2.0), 1.0) == doctest::Approx(2.0));
}

TEST_CASE("h_alpha_norm: single exponential closed form") {
    // |h(0)|^2 = 1, integral = a^2 / (2a - alpha): norm = sqrt(1 + a^2/(2a-alpha))
    const double alpha = 1.0;
    for (double a : {0.7, 1.0, 2.5}) {
        auto h = QuasiExponential::exponential(a);
        const double expected = std::sqrt(1.0 + a * a / (2.0 * a - alpha));
        CHECK(fdr::h_alpha_norm(h, alpha) == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("h_alpha_norm: membership failure at a = alpha/2") {
    auto h = QuasiExponential::exponential(0.5);
    CHECK_THROWS_AS((void)fdr::h_alpha_norm(h, 1.0), fdr::MembershipError);
}

TEST_CASE("h_alpha_norm agrees with adaptive quadrature on random curves") {
    const double alpha = 0.8;
    std::mt19937_64 rng(777);
    for (int rep = 0; rep < 25; ++rep) {
        auto h = random_qexp(rng, alpha);
        auto hp = h.derivative();
        auto integrand = [&](double y) {
            const double v = hp(y);
            return std::exp(alpha * y) * v * v;
        };
        // decay rate of the integrand is at least 2*min_rate - alpha > 0
        double min_rate = 1e9;
        for (const auto& t : h.terms()) min_rate = std::min(min_rate, t.rate);
        const double decay = 2.0 * min_rate - alpha;
        const double y_max = 45.0 / decay;
        // piecewise so the adaptive budget follows the exponential decay
        double quad = 0.0;
        double lo = 0.0;
        for (double hi = 2.0 / decay; lo < y_max; hi *= 2.0) {
            hi = std::min(hi, y_max);
            quad += oracle::integrate(integrand, lo, hi, 1e-12 * std::max(1.0, integrand(lo)));
            lo = hi;
        }
        const double expected = std::sqrt(h(0.0) * h(0.0) + quad);
        CHECK(fdr::h_alpha_norm(h, alpha) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("closure: hump function gives the two-dimensional companion matrix") {
    for (double a : {0.5, 1.0, 2.0}) {
        auto cb = fdr::closure({QuasiExponential::monomial_exp(a, 1)}, 0.5);
        REQUIRE(cb.dim() == 2);
        CHECK(cb.origin_count == 1);
        CHECK(cb.matA(0, 0) == -a);
        CHECK(cb.matA(1, 0) == 1.0);
        CHECK(cb.matA(0, 1) == 0.0);
        CHECK(cb.matA(1, 1) == -a);
        // second element is e^{-ay}
        CHECK(cb.basis[1](0.0) == doctest::Approx(1.0));
        CHECK(cb.basis[1](1.0) == doctest::Approx(std::exp(-a)));
    }
}

TEST_CASE("closure: level plus exponential is already closed") {
    const double a = 1.0;
    auto cb = fdr::closure(
        {QuasiExponential::constant_fn(1.0), QuasiExponential::exponential(a)}, 0.5);
    REQUIRE(cb.dim() == 2);
    CHECK(cb.matA(0, 0) == 0.0);
    CHECK(cb.matA(1, 0) == 0.0);
    CHECK(cb.matA(0, 1) == 0.0);
    CHECK(cb.matA(1, 1) == -a);
}

TEST_CASE("closure: quadratic hump needs dimension three") {
    // oracle: differentiate symbolically until the sampled rank stabilizes
    const double a = 1.2;
    auto v = QuasiExponential::monomial_exp(a, 2);
    {
        std::vector<QuasiExponential> chain{v};
        for (int i = 0; i < 6; ++i) chain.push_back(chain.back().derivative());
        std::vector<double> ys;
        for (double y = 0.0; y <= 8.0; y += 0.2) ys.push_back(y);
        Eigen::MatrixXd m(ys.size(), chain.size());
        for (size_t i = 0; i < ys.size(); ++i)
            for (size_t j = 0; j < chain.size(); ++j) m(i, j) = chain[j](ys[i]);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
        qr.setThreshold(1e-9);
        REQUIRE(qr.rank() == 3);  // frozen: rank stabilizes at 3
    }
    auto cb = fdr::closure({v}, 0.5);
    REQUIRE(cb.dim() == 3);
    // expected basis y^2 e^{-ay}, y e^{-ay}, e^{-ay}
    CHECK(cb.basis[1](1.0) == doctest::Approx(std::exp(-a)));
    CHECK(cb.basis[2](1.0) == doctest::Approx(std::exp(-a)));
    CHECK(cb.basis[1](2.0) == doctest::Approx(2.0 * std::exp(-2.0 * a)));
}

TEST_CASE("closure identity holds on a grid") {
    std::vector<double> ys;
    for (double y = 0.0; y <= 10.0; y += 0.1) ys.push_back(y);
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 10; ++rep) {
        auto h = random_qexp(rng, 1.0);
        auto cb = fdr::closure({h}, 1.0);
        double vmax = 1.0;
        for (const auto& b : cb.basis)
            for (double y : ys) vmax = std::max(vmax, std::abs(b(y)));
        CHECK(fdr::closure_residual(cb, ys) <= 1e-10 * (1.0 + vmax));
    }
}

TEST_CASE("closure rejects dependent inputs") {
    auto v1 = QuasiExponential::exponential(1.0);
    auto v2 = v1.scaled(2.0);
    CHECK_THROWS_AS((void)fdr::closure({v1, v2}, 0.5), fdr::DependenceError);
    auto v3 = QuasiExponential::monomial_exp(1.0, 1) + v1;
    CHECK_THROWS_AS((void)fdr::closure({v1, QuasiExponential::monomial_exp(1.0, 1), v3}, 0.5),
                    fdr::DependenceError);
}

TEST_CASE("closure is idempotent") {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 8; ++rep) {
        auto h = random_qexp(rng, 1.0);
        auto cb = fdr::closure({h}, 1.0);
        auto cb2 = fdr::closure(cb.basis, 1.0);
        REQUIRE(cb2.dim() == cb.dim());
        // same span: every element of one basis reduces to zero residual
        // against the other on a grid
        std::vector<double> ys;
        for (double y = 0.0; y <= 10.0; y += 0.25) ys.push_back(y);
        Eigen::MatrixXd m1(ys.size(), cb.basis.size()), m2(ys.size(), cb2.basis.size());
        for (size_t i = 0; i < ys.size(); ++i)
            for (int j = 0; j < cb.dim(); ++j) {
                m1(i, j) = cb.basis[j](ys[i]);
                m2(i, j) = cb2.basis[j](ys[i]);
            }
        Eigen::MatrixXd joint(ys.size(), 2 * cb.dim());
        joint << m1, m2;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(joint);
        qr.setThreshold(1e-9);
        CHECK(qr.rank() == cb.dim());
        // matA equal up to the (identical) ordering produced by construction
        CHECK((cb.matA - cb2.matA).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("shifted evaluates as composition") {
    std::mt19937_64 rng(5);
    auto h = random_qexp(rng, 1.0);
    auto s = h.shifted(0.75);
    for (double y : {0.0, 0.4, 1.9, 6.0})
        CHECK(s(y) == doctest::Approx(h(y + 0.75)).epsilon(1e-12));
}
