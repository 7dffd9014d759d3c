#include <doctest.h>

#include <array>

#include "kroner/errors.hpp"
#include "kroner/poly.hpp"
#include "kroner/probes.hpp"
#include "oracles.hpp"

using namespace kroner;
using oracle::P;

TEST_CASE("arithmetic examples") {
    CHECK((P("x1 + x2") * P("x1 - x2")) == P("x1^2 - x2^2"));
    CHECK(P("x1^2*x2").derivative(0) == P("2*x1*x2"));
    const std::array<Rat, 3> pt{Rat(2), Rat(3), Rat(0)};
    CHECK(P("x1*x2^2").evaluate(pt) == 18);
    const std::array<double, 3> ptd{2.0, 3.0, 0.0};
    CHECK(P("x1*x2^2").evaluate(std::span<const double>(ptd)) == doctest::Approx(18.0));
}

TEST_CASE("terms are canonical and ordered") {
    const Poly p = Poly::monomial(3, {1, 0, 0}, Rat(6, 4)) + Poly::monomial(3, {0, 0, 0}, Rat(10, 6));
    CHECK(p == P("3/2*x1 + 5/3"));
    REQUIRE(p.terms().size() == 2);
    CHECK(p.terms()[0].exp == Exponent{0, 0, 0});
    CHECK(p.terms()[0].coeff.get_den() == 3);
    CHECK((P("x1") - P("x1")).is_zero());
    CHECK(P("0").degree() == -1);
}

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(P("x1", 2) + P("x1", 3), ShapeError);
    CHECK_THROWS_AS(P("x1").derivative(3), ShapeError);
    CHECK_THROWS_AS(Poly::monomial(2, {0, 0, 1}), ShapeError);
}

TEST_CASE("homogeneous decomposition") {
    const auto d = homogeneous_parts(P("3 + x1 + x1*x2"));
    REQUIRE(d.parts.size() == 3);
    CHECK(d.parts.at(0) == P("3"));
    CHECK(d.parts.at(1) == P("x1"));
    CHECK(d.parts.at(2) == P("x1*x2"));
    CHECK(homogeneous_parts(P("0")).parts.empty());
    const auto single = homogeneous_parts(P("x1^2 + x2^2"));
    REQUIRE(single.parts.size() == 1);
    CHECK(single.parts.at(2) == P("x1^2 + x2^2"));
}

TEST_CASE("beta integral agrees with the binomial expansion") {
    for (unsigned a = 0; a <= 10; ++a)
        for (unsigned b = 0; b <= 10; ++b) CHECK(beta_integral(a, b) == oracle::beta_binomial(a, b));
}

TEST_CASE("radial beta transform examples") {
    CHECK(radial_beta_transform(P("x1*x2"), 1, 1) == P("1/20*x1*x2"));
    CHECK(radial_beta_transform(P("1"), 0, 0) == P("1"));
    CHECK(radial_beta_transform(P("x1^2"), 2, 0) == P("1/5*x1^2"));
    // 3!·1!/5! from the binomial oracle.
    CHECK(oracle::beta_binomial(3, 1) == Rat(1, 20));
}

TEST_CASE("property: radial beta transform matches quadrature at random points") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const Poly p = random_poly(3, 5, rng);
        const unsigned a = unsigned(rng.uniform_int(0, 3)), b = unsigned(rng.uniform_int(0, 3));
        const Poly q = radial_beta_transform(p, a, b);
        std::array<Rat, 3> x0;
        for (auto& c : x0) {
            c = Rat(long(rng.uniform_int(-7, 7)), long(rng.uniform_int(1, 5)));
            c.canonicalize();
        }
        const double want = oracle::integrate01([&](double t) {
            std::array<double, 3> tx{t * x0[0].get_d(), t * x0[1].get_d(), t * x0[2].get_d()};
            return std::pow(t, a) * std::pow(1 - t, b) * p.evaluate(std::span<const double>(tx));
        });
        CHECK(q.evaluate(x0).get_d() == doctest::Approx(want).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("property: decomposition sums back and parts scale homogeneously") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const Poly p = random_poly(3, 6, rng);
        const auto d = homogeneous_parts(p);
        CHECK(d.sum(3) == p);
        for (const auto& [r, part] : d.parts) {
            CHECK(part.is_homogeneous(r));
            const auto scaled = part.scale_substitution();
            for (int s = 0; s < int(scaled.size()); ++s) CHECK(scaled[std::size_t(s)] == (s == r ? part : Poly(3)));
        }
    }
}

TEST_CASE("property: exact arithmetic round trips") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const Poly p = random_poly(3, 8, rng), q = random_poly(3, 8, rng);
        CHECK(((p + q) - q) == p);
        CHECK((p * q) == (q * p));
        CHECK((p * (q + P("1"))) == (p * q + p));
    }
}

TEST_CASE("translation and evaluation commute") {
    const Poly p = P("x1^2*x3 - 2*x2 + 1/3");
    const std::array<Rat, 3> c{Rat(1), Rat(-2), Rat(1, 2)};
    const std::array<Rat, 3> y{Rat(3), Rat(1, 7), Rat(-1)};
    const std::array<Rat, 3> yc{y[0] + c[0], y[1] + c[1], y[2] + c[2]};
    CHECK(p.translate(c).evaluate(y) == p.evaluate(yc));
}
