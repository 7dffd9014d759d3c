#include <doctest.h>

#include <cmath>

#include "kroner/diffcalc.hpp"
#include "kroner/elasticity.hpp"
#include "kroner/errors.hpp"
#include "kroner/pathintegral.hpp"
#include "kroner/probes.hpp"
#include "oracles.hpp"

using namespace kroner;
using oracle::mat;
using oracle::vec;

namespace {

using Verts = std::vector<std::vector<double>>;

TensorField strain_x2sq() { return mat({"0", "x2", "0", "x2", "0", "0", "0", "0", "0"}, 3, true); }
TensorField strain_incompatible() { return mat({"0", "0", "0", "0", "0", "0", "0", "0", "x2^2"}, 3, true); }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<std::vector<Rat>> rat_verts(const Verts& v) {
    std::vector<std::vector<Rat>> out;
    for (const auto& p : v) {
        std::vector<Rat> q;
        for (double c : p) q.emplace_back(c);
        out.push_back(q);
    }
    return out;
}

/// E = diag(0,0,x₂²) with hand-coded first partials.
void incompatible_eval(const double* y, double* e, double* de) {
    std::fill(e, e + 9, 0.0);
    std::fill(de, de + 27, 0.0);
    e[8] = y[1] * y[1];
    de[1 * 9 + 8] = 2 * y[1];
}

}  // namespace

TEST_CASE("straight-path recovery of (x₂², 0, 0)") {
    const auto src = StrainSource::polynomial(strain_x2sq());
    const auto u = cesaro_volterra(src, PathSpec::straight({0, 0, 0}, {1, 2, 3}));
    const auto exact = oracle::cv_exact(strain_x2sq(), rat_verts({{0, 0, 0}, {1, 2, 3}}), {Rat(1), Rat(2), Rat(3)});
    CHECK(exact == std::vector<Rat>{Rat(4), Rat(0), Rat(0)});
    CHECK(max_abs_diff(u, {4, 0, 0}) <= 1e-12);
}

TEST_CASE("identity and zero strains") {
    const auto id = StrainSource::polynomial(TensorField::identity(3).with_symmetry(Symmetry::symmetric));
    const PathSpec path({{0, 0, 0}, {0.5, -1, 0}, {2, 1, 0.25}});
    CHECK(max_abs_diff(cesaro_volterra(id, path), {2, 1, 0.25}) <= 1e-13);
    const auto zero = StrainSource::polynomial(TensorField::zero(3, Shape::matrix, Symmetry::symmetric));
    CHECK(max_abs_diff(cesaro_volterra(zero, path), {0, 0, 0}) == 0.0);
    CHECK(path_independence(zero, {path, PathSpec::straight({0, 0, 0}, {2, 1, 0.25})}) == 0.0);
}

TEST_CASE("path independence") {
    const auto src = StrainSource::polynomial(strain_x2sq());
    const PathSpec straight = PathSpec::straight({0, 0, 0}, {1, 2, 3});
    const PathSpec detour({{0, 0, 0}, {1, 0, 0}, {1, 2, 3}});
    CHECK(path_independence(src, {straight, detour}) <= 1e-10);

    // Both paths must leave the x₁-x₂ plane, where the integrand vanishes for this strain.
    const Verts a{{0, 0, 0}, {1, 1, 0}}, b{{0, 0, 0}, {0, 1, 1}, {1, 1, 0}};
    const auto bad = StrainSource::polynomial(strain_incompatible());
    const std::vector<Rat> x{Rat(1), Rat(1), Rat(0)};
    const auto ua = oracle::to_double(oracle::cv_exact(strain_incompatible(), rat_verts(a), x));
    const auto ub = oracle::to_double(oracle::cv_exact(strain_incompatible(), rat_verts(b), x));
    const double dev = path_independence(bad, {PathSpec(a), PathSpec(b)});
    CHECK(dev > 0);
    CHECK(dev == doctest::Approx(max_abs_diff(ua, ub)).epsilon(1e-12));
    MESSAGE("incompatible strain, paths 0→(1,1,0): deviation " << dev);
    CHECK_THROWS_AS(path_independence(src, {straight, PathSpec::straight({0, 0, 0}, {1, 2, 2})}), PathError);
    CHECK_THROWS_AS(path_independence(src, {straight}), PathError);
}

TEST_CASE("defect loops") {
    const auto src = StrainSource::polynomial(strain_x2sq());
    for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {0, 2}}) {
        const auto loop = unit_square_loop(3, a, b);
        CHECK(max_abs_diff(defect_loop(src, loop), {0, 0, 0}) <= 1e-10);
    }
    const auto bad = StrainSource::polynomial(strain_incompatible());
    const auto scaled = StrainSource::polynomial(Rat(3) * strain_incompatible());
    const auto l23 = unit_square_loop(3, 1, 2);
    const auto r = defect_loop(bad, l23);
    const auto r3 = defect_loop(scaled, l23);
    for (std::size_t i = 0; i < 3; ++i) CHECK(r3[i] == doctest::Approx(3 * r[i]).epsilon(1e-13));

    // Reference values from the exact and the Simpson oracle.
    const Verts sq12{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 0}};
    const Verts sq23{{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {0, 0, 1}, {0, 0, 0}};
    const std::vector<Rat> origin{Rat(0), Rat(0), Rat(0)};
    CHECK(oracle::cv_exact(strain_incompatible(), rat_verts(sq12), origin) == std::vector<Rat>{0, 0, 0});
    CHECK(oracle::cv_exact(strain_incompatible(), rat_verts(sq23), origin) == std::vector<Rat>{0, 1, -1});
    const auto simpson12 = oracle::cv_simpson(3, incompatible_eval, sq12, {0, 0, 0});
    const auto simpson23 = oracle::cv_simpson(3, incompatible_eval, sq23, {0, 0, 0});
    CHECK(max_abs_diff(simpson12, {0, 0, 0}) <= 1e-12);
    CHECK(max_abs_diff(simpson23, {0, 1, -1}) <= 1e-10);
    // x₁-x₂ plane: the integrand vanishes identically for this strain.
    CHECK(max_abs_diff(defect_loop(bad, unit_square_loop(3, 0, 1)), {0, 0, 0}) <= 1e-15);
    CHECK(max_abs_diff(r, {0, 1, -1}) <= 1e-12);

    CHECK_THROWS_AS(defect_loop(src, PathSpec::straight({0, 0, 0}, {1, 0, 0})), PathError);
}

TEST_CASE("path validation") {
    CHECK_THROWS_AS(PathSpec({{0, 0, 0}}), PathError);
    CHECK_THROWS_AS(PathSpec({{0, 0, 0}, {0, 0, 0}}), PathError);
    CHECK_THROWS_AS(PathSpec({{0, 0, 0}, {1, 0}}), PathError);
    CHECK_THROWS_AS(PathSpec({{0, 0, 0, 0}, {1, 0, 0, 0}}), PathError);
    CHECK_THROWS_AS(PathSpec({{0, 0, 0}, {NAN, 0, 0}}), PathError);
    CHECK_THROWS_AS(cesaro_volterra(StrainSource::polynomial(strain_x2sq()), PathSpec::straight({0, 0}, {1, 1})), PathError);
    CHECK_THROWS_AS(cesaro_volterra(StrainSource::polynomial(strain_x2sq()), PathSpec::straight({0, 0, 0}, {1, 1, 1}), {1, 1}),
                    PathError);
    CHECK(PathSpec({{0, 0}, {3, 4}, {3, 0}}).length() == doctest::Approx(9.0));
    CHECK(unit_square_loop(2, 0, 1).is_closed());
}

TEST_CASE("callable sources") {
    const auto sym = StrainSource::callable(3, incompatible_eval, false);
    CHECK_FALSE(sym.thread_safe());
    const auto l23 = unit_square_loop(3, 1, 2);
    CHECK(max_abs_diff(defect_loop(sym, l23), {0, 1, -1}) <= 1e-12);

    const auto skewed = StrainSource::callable(3, [](const double*, double* e, double* de) {
        std::fill(e, e + 9, 0.0);
        std::fill(de, de + 27, 0.0);
        e[1] = 1.0;
    });
    try {
        (void)cesaro_volterra(skewed, PathSpec::straight({0, 0, 0}, {1, 1, 1}));
        FAIL("expected SymmetryError");
    } catch (const SymmetryError& err) {
        CHECK(std::string(err.what()).find("entry 1,2") != std::string::npos);
    }

    const auto fd = StrainSource::finite_difference(3, [](const double* y, double* e) {
        std::fill(e, e + 9, 0.0);
        e[1] = e[3] = y[1];
    });
    const auto est = cesaro_volterra_estimate(fd, PathSpec::straight({0, 0, 0}, {1, 2, 3}));
    CHECK(est.finite_difference);
    CHECK(max_abs_diff(est.displacement, {4, 0, 0}) <= 1e-6);
    CHECK_THROWS_AS(StrainSource::finite_difference(3, [](const double*, double*) {}, 0.0), PreconditionError);
}

TEST_CASE("property: straight-path recovery matches p1 at random points") {
    SplitMix64 rng(70);
    for (int trial = 0; trial < 20; ++trial) {
        const TensorField e = def_op(random_vector_field(3, 5, rng));
        const auto src = StrainSource::polynomial(e);
        const TensorField u = p1(e);
        const std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        std::vector<double> want;
        for (const auto& c : u.entries()) want.push_back(c.evaluate(std::span<const double>(x)));
        CHECK(max_abs_diff(cesaro_volterra(src, PathSpec::straight({0, 0, 0}, x)), want) <= 1e-10);
    }
}

TEST_CASE("property: quadrature error decreases with the Gauss order") {
    SplitMix64 rng(71);
    const TensorField e = def_op(random_vector_field(3, 7, rng, 7));
    REQUIRE(e.degree() == 6);
    const auto src = StrainSource::polynomial(e);
    const Verts v{{0, 0, 0}, {0.7, -0.2, 0.4}, {1.1, 0.9, -0.6}};
    const std::vector<Rat> x{Rat(v.back()[0]), Rat(v.back()[1]), Rat(v.back()[2])};
    const auto exact = oracle::to_double(oracle::cv_exact(e, rat_verts(v), x));
    double prev = INFINITY;
    for (int order : {2, 4, 8, 16}) {
        const double err = max_abs_diff(cesaro_volterra(src, PathSpec(v), {order, 1}), exact);
        CHECK((err < prev || err <= 1e-12));
        prev = err;
    }
}

TEST_CASE("property: moving the start point changes the result by a rigid motion") {
    SplitMix64 rng(72);
    const TensorField e = def_op(random_vector_field(3, 4, rng));
    const auto src = StrainSource::polynomial(e);
    const std::vector<double> s{0.3, -0.4, 0.2};
    auto diff = [&](const std::vector<double>& x) {
        const auto a = cesaro_volterra(src, PathSpec::straight(s, x));
        const auto b = cesaro_volterra(src, PathSpec::straight({0, 0, 0}, x));
        return std::vector<double>{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
    };
    constexpr double h = 1e-3;
    for (double gx : {-0.5, 0.5})
        for (double gy : {-0.5, 0.5})
            for (double gz : {-0.5, 0.5}) {
                const std::vector<double> x{gx + 0.01, gy - 0.02, gz + 0.03};
                double g[3][3];
                for (int j = 0; j < 3; ++j) {
                    auto xp = x, xm = x;
                    xp[std::size_t(j)] += h;
                    xm[std::size_t(j)] -= h;
                    const auto dp = diff(xp), dm = diff(xm);
                    for (int i = 0; i < 3; ++i) g[i][j] = (dp[std::size_t(i)] - dm[std::size_t(i)]) / (2 * h);
                }
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) CHECK(std::abs(0.5 * (g[i][j] + g[j][i])) <= 1e-8);
            }
}

TEST_CASE("2D recovery") {
    const TensorField e = def_op(vec({"x1*x2^2", "x1^3 - x2"}, 2));
    const auto src = StrainSource::polynomial(e);
    const auto u = cesaro_volterra(src, PathSpec({{0, 0}, {1, 0}, {1, 2}}));
    const auto exact = oracle::to_double(oracle::cv_exact(e, rat_verts({{0, 0}, {1, 0}, {1, 2}}), {Rat(1), Rat(2)}));
    CHECK(max_abs_diff(u, exact) <= 1e-12);
}
