#include <doctest.h>

#include "kroner/bgg.hpp"
#include "kroner/diffcalc.hpp"
#include "kroner/errors.hpp"
#include "kroner/probes.hpp"
#include "kroner/suites.hpp"
#include "oracles.hpp"

using namespace kroner;
using oracle::mat;
using oracle::P;
using oracle::vec;

namespace {

const TensorField x3 = TensorField::position(3);

Form random_form(int dim, int k, ValueSpace vs, int deg, SplitMix64& rng) {
    Form w(dim, k, vs);
    for (std::size_t s = 0; s < w.basis_size(); ++s)
        for (int c = 0; c < w.components(); ++c) w.coeff(s, c) = random_poly(dim, deg, rng);
    return w;
}

WForm random_wform(int dim, int k, int deg, SplitMix64& rng) {
    return WForm(random_form(dim, k, ValueSpace::skew, deg, rng), random_form(dim, k, ValueSpace::vector, deg, rng));
}

const TensorField& field(const Value& v) { return std::get<TensorField>(v); }

}  // namespace

TEST_CASE("S1 in proxy form is M ↦ Mᵀ - tr(M) I") {
    SplitMix64 rng(30);
    for (int trial = 0; trial < 10; ++trial) {
        const Form w = random_form(3, 1, ValueSpace::vector, 3, rng);
        CHECK(proxy(s_op(w)) == s1_op(proxy(w)));
        CHECK(s_invertible_inverse(3).apply(s_op(w)) == w);
    }
    CHECK(s_invertible_degree(3) == 1);
    CHECK(s_invertible_degree(2) == 0);
}

TEST_CASE("S is algebraic") {
    for (int dim : {2, 3})
        for (int k = 0; k < dim; ++k) {
            const AlgebraicMap& m = s_matrix(dim, k);
            CHECK(m.is_algebraic([](const Form& w) { return s_op(w); }, {P("x1", dim), P("x2^2", dim), P("x1*x2 - 3", dim)}));
        }
    CHECK_THROWS_AS(s_matrix(3, 0).inverse(), PreconditionError);
}

TEST_CASE("property: dS + Sd = 0 on random vector-valued forms") {
    SplitMix64 rng(31);
    for (int dim : {2, 3})
        for (int k = 0; k + 1 < dim; ++k)
            for (int trial = 0; trial < 10; ++trial) {
                const Form w = random_form(dim, k, ValueSpace::vector, 4, rng);
                CHECK((ext_d(s_op(w)) + s_op(ext_d(w))).is_zero());
            }
}

TEST_CASE("T on constant inputs") {
    // ∫₀¹ t(1-t) dt = 1/6 and ∫₀¹ t²(1-t) dt = 1/12.
    CHECK(oracle::beta_binomial(1, 1) == Rat(1, 6));
    CHECK(oracle::beta_binomial(2, 1) == Rat(1, 12));
    const TensorField v2 = mat({"1", "2", "3", "2", "5", "-1", "3", "-1", "7"});
    CHECK(proxy(t_op(unproxy(v2, 2, ValueSpace::vector))) == Rat(1, 6) * cross_right(cross_left(x3, v2), x3));
    const TensorField v3 = vec({"1", "-2", "3"});
    CHECK(proxy(t_op(unproxy(v3, 3, ValueSpace::vector))) == Rat(1, 12) * outer(cross(x3, v3), x3));
    for (int k = 1; k <= 3; ++k) CHECK(t_op(Form(3, k, ValueSpace::vector)).is_zero());
}

TEST_CASE("property: A² = 0 and the AB homotopy identity on random forms") {
    SplitMix64 rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        CHECK(a_op(a_op(random_wform(3, 0, 4, rng))).is_zero());
        CHECK(a_op(a_op(random_wform(3, 1, 4, rng))).is_zero());
        const WForm w = random_wform(3, 2, 4, rng);
        CHECK(a_op(b_op(w)) + b_op(a_op(w)) == w);
        const WForm w2 = random_wform(2, 1, 4, rng);
        CHECK(a_op(b_op(w2)) + b_op(a_op(w2)) == w2);
    }
    CHECK(b_op(WForm::zero(3, 2)).is_zero());
}

TEST_CASE("Γ-row homotopy at the top level") {
    const Row& gamma = derived(3).rows.at(1);
    REQUIRE(gamma.p.at(3).has_value());
    SplitMix64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const WForm w = random_wform(3, 3, 3, rng);
        const Form& om = w.skew;
        const Form& mu = w.vec;
        const Form want_vec = poincare(mu) + ext_d(s_invertible_inverse(3).apply(poincare(om) - t_op(mu)));
        const WForm got = std::get<WForm>((*gamma.p[3])(Value(w)));
        CHECK(got.skew.is_zero());
        CHECK(got.vec == want_vec);
    }
}

TEST_CASE("transfer with identity projections leaves the homotopy unchanged") {
    const Row& top = derived(3).rows.at(0);
    std::vector<LinOpExpr> id;
    for (const auto& s : top.spaces) id.push_back(LinOpExpr::identity(s));
    const Row same = homotopy_transfer(top, "copy", id, id, std::vector<std::optional<LinOpExpr>>(top.spaces.size() - 1));
    for (std::size_t i = 1; i < top.spaces.size(); ++i)
        for (const auto& probe : top.probes[i]) CHECK(value_equal((*same.p[i])(probe), (*top.p[i])(probe)));
}

TEST_CASE("transfer rejects a projection that is not a left inverse") {
    const Row& top = derived(3).rows.at(0);
    std::vector<LinOpExpr> proj, lift;
    for (const auto& s : top.spaces) {
        proj.push_back(Rat(2) * LinOpExpr::identity(s));
        lift.push_back(LinOpExpr::identity(s));
    }
    CHECK_THROWS_AS(homotopy_transfer(top, "bad", proj, lift, std::vector<std::optional<LinOpExpr>>(top.spaces.size() - 1)),
                    CommutationError);
}

TEST_CASE("transferred rows satisfy the homotopy identity on random probes") {
    SplitMix64 rng(34);
    for (int dim : {2, 3}) {
        Row row = derived(dim).rows.back();
        for (std::size_t i = 0; i < row.spaces.size(); ++i) {
            std::vector<Value> probes;
            for (int q = 0; q < 30; ++q) {
                const Space& s = row.spaces[i];
                if (s.shape == Shape::scalar)
                    probes.emplace_back(TensorField::scalar(random_poly(dim, 4, rng)));
                else if (s.shape == Shape::vector)
                    probes.emplace_back(random_vector_field(dim, 4, rng));
                else
                    probes.emplace_back(random_symmetric_field(dim, 4, rng));
            }
            row.probes[i] = std::move(probes);
        }
        const auto failure = check_homotopy(row);
        CHECK_MESSAGE(!failure, failure.value_or(""));
    }
}

TEST_CASE("derived elasticity operators") {
    const Derivation& d = derived(3);
    REQUIRE(d.operators.size() == 3);
    const LinOpExpr &p1 = d.operators[0], &p2 = d.operators[1], &p3 = d.operators[2];
    const TensorField id3 = TensorField::identity(3).with_symmetry(Symmetry::symmetric);
    CHECK(field(p1(Value(id3))) == x3);
    CHECK(def_op(x3) == TensorField::identity(3));
    const TensorField e = mat({"0", "0", "0", "0", "0", "0", "0", "0", "x2^2"}, 3, true);
    CHECK(def_op(field(p1(Value(e)))) + field(p2(Value(inc_op(e)))) == e);
    for (const auto& v : monomial_fields(3, Shape::vector, Symmetry::none, 4))
        CHECK(field(p2(p3(Value(v)))).is_zero());
    for (const auto& s : monomial_fields(3, Shape::matrix, Symmetry::symmetric, 4))
        CHECK(field(p1(p2(Value(s)))).is_zero());
    REQUIRE(derived(2).operators.size() == 2);
    CHECK(d.steps.size() == 4);
    for (const auto& st : d.steps) CHECK(st.checks > 0);
}

TEST_CASE("sign resolution on synthetic operators") {
    const Space vs = Space::field(3, Shape::vector);
    std::vector<Value> probes;
    for (const auto& v : monomial_fields(3, Shape::vector, Symmetry::none, 2)) probes.emplace_back(v);
    const std::vector<LinOpExpr> derived_ops{-LinOpExpr::identity(vs)};
    auto scaled = [](const Value& v, const std::vector<int>& s) { return Rat(s[0]) * v; };

    const SignReport unique = resolve_signs(3, 2, derived_ops, {{"N", {"a"}, scaled, probes}});
    CHECK(unique.resolved());
    CHECK(unique.assignments_tested == 2);
    CHECK(unique.assignments_matching == 1);
    CHECK(unique.sign("a") == -1);
    CHECK(unique.to_json()["slots"][0]["resolved_sign"] == -1);

    auto ignores = [](const Value& v, const std::vector<int>&) { return Rat(-1) * v; };
    const SignReport ambiguous = resolve_signs(3, 2, derived_ops, {{"N", {"a"}, ignores, probes}});
    CHECK_FALSE(ambiguous.resolved());
    CHECK(ambiguous.slots.at(0).status == "ambiguous");
    CHECK_FALSE(ambiguous.sign("a").has_value());

    auto doubled = [](const Value& v, const std::vector<int>& s) { return Rat(2 * s[0]) * v; };
    const SignReport none = resolve_signs(3, 2, derived_ops, {{"N", {"a"}, doubled, probes}});
    CHECK_FALSE(none.resolved());
    CHECK(none.slots.at(0).status == "no assignment");
    CHECK_FALSE(none.diffs.empty());
    CHECK(none.to_json()["slots"][0]["resolved_sign"].is_null());
}

TEST_CASE("convention set names every index convention") {
    const std::string c = convention_set();
    for (const char* piece : {"(u∧M)_ij = ε_iab u_a M_bj", "(M∧u)_ij = ε_jab M_ia u_b", "(∇×M)_ij = ε_iab ∂_a M_bj",
                              "(M×∇)_ij = ε_jab ∂_a M_ib", "(div M)_i = ∂_j M_ij", "x⊥ = (x₂, -x₁)"})
        CHECK_MESSAGE(c.find(piece) != std::string::npos, piece);
}
