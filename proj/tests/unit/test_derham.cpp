#include <doctest.h>

#include "kroner/bgg.hpp"
#include "kroner/diffcalc.hpp"
#include "kroner/errors.hpp"
#include "kroner/forms.hpp"
#include "kroner/probes.hpp"
#include "kroner/suites.hpp"
#include "oracles.hpp"

using namespace kroner;
using oracle::mat;
using oracle::P;
using oracle::vec;

namespace {

Form form1(const std::vector<std::string>& a, int dim = 3) { return unproxy(vec(a, dim), 1, ValueSpace::scalar); }

Form random_form(int dim, int k, ValueSpace vs, int deg, SplitMix64& rng) {
    Form w(dim, k, vs);
    for (std::size_t s = 0; s < w.basis_size(); ++s)
        for (int c = 0; c < w.components(); ++c) w.coeff(s, c) = random_poly(dim, deg, rng);
    return w;
}

const ValueSpace kSpaces[] = {ValueSpace::scalar, ValueSpace::vector, ValueSpace::skew};

}  // namespace

TEST_CASE("exterior derivative examples") {
    Form w(3, 1, ValueSpace::scalar);
    w.set({1}, 0, P("x1"));
    Form want(3, 2, ValueSpace::scalar);
    want.set({0, 1}, 0, P("1"));
    CHECK(ext_d(w) == want);
    const Form f = Form::scalar0(P("x1*x2*x3"));
    CHECK(ext_d(ext_d(f)).is_zero());
    CHECK(proxy(ext_d(f)) == grad(TensorField::scalar(P("x1*x2*x3"))));
    CHECK_THROWS_AS(ext_d(Form(3, 3, ValueSpace::scalar)), PreconditionError);
}

TEST_CASE("Koszul operator examples") {
    Form w(3, 2, ValueSpace::scalar);
    w.set({0, 1}, 0, P("1"));
    CHECK(koszul(w) == form1({"-x2", "x1", "0"}));
    CHECK(koszul(form1({"-x2", "x1", "0"})).is_zero());
    CHECK(koszul(form1({"x2*x3^2", "0", "0"})) == Form::scalar0(P("x1*x2*x3^2")));
    CHECK_THROWS_AS(koszul(Form::scalar0(P("x1"))), PreconditionError);
}

TEST_CASE("Poincaré operator examples") {
    CHECK(poincare(ext_d(Form::scalar0(P("x1^2")))) == Form::scalar0(P("x1^2")));
    Form dz(3, 2, ValueSpace::scalar);
    dz.set({0, 1}, 0, P("1"));
    const Form p = poincare(dz);
    CHECK(proxy(p) == vec({"-1/2*x2", "1/2*x1", "0"}));
    CHECK(curl_vec(proxy(p)) == vec({"0", "0", "1"}));
    const Form w = form1({"0", "x1", "0"});
    CHECK(poincare(w) == Form::scalar0(P("1/2*x1*x2")));
    CHECK(ext_d(poincare(w)) + poincare(ext_d(w)) == w);
}

TEST_CASE("proxies follow the column conventions") {
    // V-valued 1-form: column j is the dx_j coefficient.
    Form w(3, 1, ValueSpace::vector);
    w.set({0}, 0, P("x1"));
    w.set({2}, 1, P("x3"));
    CHECK(proxy(w) == mat({"x1", "0", "0", "0", "0", "x3", "0", "0", "0"}));
    // V-valued 2-form: columns dx₂∧dx₃, dx₃∧dx₁, dx₁∧dx₂.
    Form v(3, 2, ValueSpace::vector);
    v.set({1, 2}, 0, P("1"));
    v.set({0, 2}, 1, P("1"));  // dx₁∧dx₃ = -dx₃∧dx₁
    v.set({0, 1}, 2, P("x2"));
    CHECK(proxy(v) == mat({"1", "0", "0", "0", "-1", "0", "0", "0", "x2"}));
    // J₀(W, v) = (Skw⁻¹W, Skw v); J₃ is the identity on the pair.
    Form sk(3, 0, ValueSpace::skew), ve(3, 0, ValueSpace::vector);
    sk.coeff(0, 2) = P("x1");
    ve.coeff(0, 0) = P("1");
    const WPairField j0 = j0_proxy(WForm(sk, ve));
    CHECK(j0.vec == vec({"0", "0", "x1"}));
    CHECK(j0.skew == vec_skw(vec({"1", "0", "0"})));
    CHECK(j0_unproxy(j0) == WForm(sk, ve));
    Form sk3(3, 3, ValueSpace::skew), ve3(3, 3, ValueSpace::vector);
    sk3.coeff(0, 0) = P("x2");
    ve3.coeff(0, 1) = P("x3");
    const WPairField j3 = jtop_proxy(WForm(sk3, ve3));
    CHECK(j3.skew == vec_skw(vec({"x2", "0", "0"})));
    CHECK(j3.vec == vec({"0", "x3", "0"}));
}

TEST_CASE("property: proxy round trips on random forms") {
    SplitMix64 rng(12);
    for (int dim : {2, 3})
        for (int k = 0; k <= dim; ++k)
            for (auto vs : {ValueSpace::scalar, ValueSpace::vector}) {
                const Form w = random_form(dim, k, vs, 3, rng);
                CHECK(unproxy(proxy(w), k, vs) == w);
            }
}

TEST_CASE("property: Cartan identity on homogeneous monomial forms") {
    for (int dim : {2, 3})
        for (auto vs : kSpaces)
            for (int k = 0; k <= dim; ++k)
                for (const auto& w : monomial_forms(dim, k, vs, 6)) {
                    const int r = w.poly_degree();
                    Form lhs(dim, k, vs);
                    if (k > 0) lhs += ext_d(koszul(w));
                    if (k < dim) lhs += koszul(ext_d(w));
                    CHECK(lhs == Rat(r + k) * w);
                }
}

TEST_CASE("property: nilpotency and homotopy identity up to degree 6") {
    for (int dim : {2, 3})
        for (auto vs : kSpaces)
            for (int k = 0; k <= dim; ++k)
                for (const auto& w : monomial_forms(dim, k, vs, 6)) {
                    if (k + 2 <= dim) CHECK(ext_d(ext_d(w)).is_zero());
                    if (k >= 2) {
                        CHECK(koszul(koszul(w)).is_zero());
                        CHECK(poincare(poincare(w)).is_zero());
                    }
                    Form h(dim, k, vs);
                    if (k > 0) h += ext_d(poincare(w));
                    if (k < dim) h += poincare(ext_d(w));
                    // At k = 0 the identity holds up to the value at the base point.
                    const Form want = k == 0 ? w - w.map_coeffs([](const Poly& p) {
                        return Poly::constant(p.dim(), p.coefficient(Exponent{}));
                    })
                                             : w;
                    CHECK(h == want);
                }
}

TEST_CASE("property: base point covariance") {
    SplitMix64 rng(20);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = trial % 2 ? 2 : 3;
        const int k = 1 + int(rng.uniform_int(0, dim - 1));
        const Form w = random_form(dim, k, kSpaces[trial % 3], 3, rng);
        BasePoint x0;
        std::vector<Rat> minus;
        for (int i = 0; i < dim; ++i) {
            Rat c(long(rng.uniform_int(-5, 5)), long(rng.uniform_int(1, 3)));
            c.canonicalize();
            x0.coords.push_back(c);
            minus.push_back(-c);
        }
        CHECK(poincare(w, x0) == poincare(w.translate(x0.coords)).translate(minus));
        CHECK(koszul(w, x0) == koszul(w.translate(x0.coords)).translate(minus));
    }
}

TEST_CASE("library suite passes") {
    for (int dim : {2, 3})
        for (const auto& r : derham_suite(dim, 4)) {
            INFO(r.name << ": " << r.counterexample.value_or(""));
            CHECK(r.pass);
        }
}
