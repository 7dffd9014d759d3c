#include "kroner/suites.hpp"

#include <algorithm>

#include "kroner/bgg.hpp"
#include "kroner/diffcalc.hpp"
#include "kroner/elasticity.hpp"
#include "kroner/errors.hpp"
#include "kroner/forms.hpp"

namespace kroner {

nlohmann::json IdentityResult::to_json(bool with_timing) const {
    nlohmann::json j{{"name", name}, {"status", pass ? "pass" : "fail"}, {"probes", probes}};
    j["counterexample"] = counterexample ? nlohmann::json(*counterexample) : nlohmann::json(nullptr);
    if (with_timing) j["seconds"] = seconds;
    return j;
}

namespace {

using Opt = std::optional<std::string>;

std::string describe_mismatch(const std::string& input, const std::string& got, const std::string& want) {
    return "input " + input + ": got " + got + ", expected " + want;
}

Opt expect_equal(const TensorField& in, const TensorField& got, const TensorField& want) {
    if (got == want) return std::nullopt;
    return describe_mismatch(in.to_string(), got.to_string(), want.to_string());
}

Opt expect_zero(const TensorField& in, const TensorField& got) {
    if (got.is_zero()) return std::nullopt;
    return describe_mismatch(in.to_string(), got.to_string(), "0");
}

Opt expect_equal(const Form& in, const Form& got, const Form& want) {
    if (got == want) return std::nullopt;
    return describe_mismatch(in.to_string(), got.to_string(), want.to_string());
}

Opt expect_equal(const WForm& in, const WForm& got, const WForm& want) {
    if (got.skew == want.skew && got.vec == want.vec) return std::nullopt;
    return describe_mismatch(in.to_string(), got.to_string(), want.to_string());
}

/// Runs a thunk, turning exceptions into counterexamples.
template <class F>
Opt guarded(const std::string& input, F f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return "input " + input + ": threw " + e.what();
    }
}

std::vector<TensorField> sym_probes(int dim, int max_degree, int min_degree = 0) {
    return monomial_fields(dim, Shape::matrix, Symmetry::symmetric, max_degree, min_degree);
}
std::vector<TensorField> vec_probes(int dim, int max_degree, int min_degree = 0) {
    return monomial_fields(dim, Shape::vector, Symmetry::none, max_degree, min_degree);
}
std::vector<TensorField> scalar_probes(int dim, int max_degree, int min_degree = 0) {
    return monomial_fields(dim, Shape::scalar, Symmetry::none, max_degree, min_degree);
}

template <class T>
using Test = std::function<Opt(const T&)>;

std::string dimtag(int dim) { return std::to_string(dim) + "D"; }

}  // namespace

// Operator families ------------------------------------------------------------------

ElasticityOps derived_elasticity_ops(int dim) {
    ElasticityOps ops;
    ops.dim = dim;
    for (const auto& e : derived(dim).operators)
        ops.p.push_back([e](const TensorField& f) { return std::get<TensorField>(e(Value(f))); });
    return ops;
}

ElasticityOps printed_elasticity_ops(int dim) {
    ElasticityOps ops;
    ops.dim = dim;
    if (dim == 3) {
        ops.p = {[](const TensorField& f) { return p1(f); }, [](const TensorField& f) { return p2(f); },
                 [](const TensorField& f) { return p3(f); }};
    } else {
        ops.p = {[](const TensorField& f) { return p1_2d(f); }, [](const TensorField& f) { return p2_2d(f); }};
    }
    return ops;
}

// de Rham ------------------------------------------------------------------------------

std::vector<IdentityResult> derham_suite(int dim, int max_degree, unsigned jobs) {
    std::vector<IdentityResult> out;
    const std::string tag = dimtag(dim);
    for (int k = 0; k <= dim; ++k) {
        const auto probes = monomial_forms(dim, k, ValueSpace::scalar, max_degree);
        const std::string ks = std::to_string(k);
        if (k + 2 <= dim)
            out.push_back(check_probes<Form>(tag + " d∘d = 0 on " + ks + "-forms", probes, Test<Form>([](const Form& w) {
                return guarded(w.to_string(), [&]() -> Opt {
                    const Form r = ext_d(ext_d(w));
                    return r.is_zero() ? Opt{} : describe_mismatch(w.to_string(), r.to_string(), "0");
                });
            }), jobs));
        if (k >= 2) {
            out.push_back(check_probes<Form>(tag + " κ∘κ = 0 on " + ks + "-forms", probes, Test<Form>([](const Form& w) {
                return guarded(w.to_string(), [&]() -> Opt {
                    const Form r = koszul(koszul(w));
                    return r.is_zero() ? Opt{} : describe_mismatch(w.to_string(), r.to_string(), "0");
                });
            }), jobs));
            out.push_back(check_probes<Form>(tag + " 𝔭∘𝔭 = 0 on " + ks + "-forms", probes, Test<Form>([](const Form& w) {
                return guarded(w.to_string(), [&]() -> Opt {
                    const Form r = poincare(poincare(w));
                    return r.is_zero() ? Opt{} : describe_mismatch(w.to_string(), r.to_string(), "0");
                });
            }), jobs));
        }
        out.push_back(check_probes<Form>(tag + " 𝔭d + d𝔭 = id on " + ks + "-forms", probes, Test<Form>([dim, k](const Form& w) {
            return guarded(w.to_string(), [&]() -> Opt {
                if (k == 0) {
                    // 𝔭d f = f - f(0)
                    const std::vector<Rat> zero(std::size_t(dim), Rat(0));
                    Form want = w;
                    want.coeff(0, 0) -= Poly::constant(dim, w.coeff(0, 0).evaluate(zero));
                    return expect_equal(w, poincare(ext_d(w)), want);
                }
                Form lhs = ext_d(poincare(w));
                if (k < dim) lhs = lhs + poincare(ext_d(w));
                return expect_equal(w, lhs, w);
            });
        }), jobs));
        for (int r = 0; r <= max_degree; ++r) {
            if (k == 0 && r == 0) continue;
            const auto hom = monomial_forms(dim, k, ValueSpace::scalar, r, r);
            out.push_back(check_probes<Form>(tag + " dκ + κd = (r+k)·id on H_" + std::to_string(r) + " " + ks + "-forms", hom,
                                             Test<Form>([dim, k, r](const Form& w) {
                                                 return guarded(w.to_string(), [&]() -> Opt {
                                                     Form lhs(dim, k, ValueSpace::scalar);
                                                     if (k > 0) lhs = lhs + ext_d(koszul(w));
                                                     if (k < dim) lhs = lhs + koszul(ext_d(w));
                                                     return expect_equal(w, lhs, Rat(r + k) * w);
                                                 });
                                             }),
                                             jobs));
        }
    }
    return out;
}

// BGG ------------------------------------------------------------------------------------

std::vector<IdentityResult> bgg_suite(int dim, int max_degree, unsigned jobs) {
    std::vector<IdentityResult> out;
    const std::string tag = dimtag(dim);
    for (int k = 0; k + 2 <= dim; ++k) {
        const auto probes = monomial_forms(dim, k, ValueSpace::vector, max_degree);
        out.push_back(check_probes<Form>(tag + " dS_k + S_{k+1}d = 0, k=" + std::to_string(k), probes, Test<Form>([](const Form& w) {
            return guarded(w.to_string(), [&]() -> Opt {
                const Form r = ext_d(s_op(w)) + s_op(ext_d(w));
                return r.is_zero() ? Opt{} : describe_mismatch(w.to_string(), r.to_string(), "0");
            });
        }), jobs));
    }
    for (int k = 0; k <= dim; ++k) {
        std::vector<WForm> probes;
        for (auto& v : monomial_wforms(dim, k, max_degree)) probes.push_back(std::get<WForm>(v));
        const std::string ks = std::to_string(k);
        if (k + 2 <= dim)
            out.push_back(check_probes<WForm>(tag + " 𝒜∘𝒜 = 0, k=" + ks, probes, Test<WForm>([](const WForm& w) {
                return guarded(w.to_string(), [&]() -> Opt {
                    const WForm r = a_op(a_op(w));
                    return r.is_zero() ? Opt{} : describe_mismatch(w.to_string(), r.to_string(), "0");
                });
            }), jobs));
        if (k == 0) {
            out.push_back(check_probes<WForm>(tag + " 𝒜(ℬ𝒜 - id) = 0, k=0", probes, Test<WForm>([](const WForm& w) {
                return guarded(w.to_string(), [&]() -> Opt {
                    const WForm r = a_op(b_op(a_op(w)) - w);
                    return r.is_zero() ? Opt{} : describe_mismatch(w.to_string(), r.to_string(), "0");
                });
            }), jobs));
        } else {
            out.push_back(check_probes<WForm>(tag + " 𝒜ℬ + ℬ𝒜 = id, k=" + ks, probes, Test<WForm>([dim, k](const WForm& w) {
                return guarded(w.to_string(), [&]() -> Opt {
                    WForm lhs = a_op(b_op(w));
                    if (k < dim) lhs = lhs + b_op(a_op(w));
                    return expect_equal(w, lhs, w);
                });
            }), jobs));
        }
    }
    return out;
}

// Elasticity --------------------------------------------------------------------------------

std::vector<IdentityResult> elasticity_identities(const ElasticityOps& ops, const std::string& label, int max_degree,
                                                  unsigned jobs) {
    std::vector<IdentityResult> out;
    const int n = ops.dim;
    if (n == 3) {
        const FieldOp P1 = ops.p[0], P2 = ops.p[1], P3 = ops.p[2];
        out.push_back(check_probes<TensorField>(label + " def∘P1∘def = def", vec_probes(3, max_degree), Test<TensorField>([P1](const TensorField& u) {
            return guarded(u.to_string(), [&] { return expect_equal(u, def_op(P1(def_op(u))), def_op(u)); });
        }), jobs));
        out.push_back(check_probes<TensorField>(label + " P2∘inc + def∘P1 = id", sym_probes(3, max_degree), Test<TensorField>([P1, P2](const TensorField& e) {
            return guarded(e.to_string(), [&] { return expect_equal(e, P2(inc_op(e)) + def_op(P1(e)), e); });
        }), jobs));
        out.push_back(check_probes<TensorField>(label + " P3∘div + inc∘P2 = id", sym_probes(3, max_degree), Test<TensorField>([P2, P3](const TensorField& v) {
            return guarded(v.to_string(), [&] { return expect_equal(v, P3(div_rows(v)) + inc_op(P2(v)), v); });
        }), jobs));
        out.push_back(check_probes<TensorField>(label + " div∘P3 = id", vec_probes(3, max_degree), Test<TensorField>([P3](const TensorField& v) {
            return guarded(v.to_string(), [&] { return expect_equal(v, div_rows(P3(v)), v); });
        }), jobs));
    } else {
        const FieldOp P1 = ops.p[0], P2 = ops.p[1];
        out.push_back(check_probes<TensorField>(label + " air∘P1∘air = air", scalar_probes(2, max_degree), Test<TensorField>([P1](const TensorField& u) {
            return guarded(u.to_string(), [&] { return expect_equal(u, air_op(P1(air_op(u))), air_op(u)); });
        }), jobs));
        out.push_back(check_probes<TensorField>(label + " P2∘div + air∘P1 = id", sym_probes(2, max_degree), Test<TensorField>([P1, P2](const TensorField& v) {
            return guarded(v.to_string(), [&] { return expect_equal(v, P2(div_rows(v)) + air_op(P1(v)), v); });
        }), jobs));
        out.push_back(check_probes<TensorField>(label + " div∘P2 = id", vec_probes(2, max_degree), Test<TensorField>([P2](const TensorField& v) {
            return guarded(v.to_string(), [&] { return expect_equal(v, div_rows(P2(v)), v); });
        }), jobs));
    }
    return out;
}

std::vector<IdentityResult> conformance_suite(int dim, int max_degree, unsigned jobs) {
    std::vector<IdentityResult> out;
    const ElasticityOps d = derived_elasticity_ops(dim), p = printed_elasticity_ops(dim);
    const std::vector<std::string> names = dim == 3 ? std::vector<std::string>{"P1", "P2", "P3"} : std::vector<std::string>{"P1_2D", "P2_2D"};
    for (std::size_t i = 0; i < names.size(); ++i) {
        const bool vector_input = (dim == 3 && i == 2) || (dim == 2 && i == 1);
        const auto probes = vector_input ? vec_probes(dim, max_degree) : sym_probes(dim, max_degree);
        const FieldOp a = d.p[i], b = p.p[i];
        out.push_back(check_probes<TensorField>("printed " + names[i] + " ≡ derived " + names[i], probes, Test<TensorField>([a, b](const TensorField& f) {
            return guarded(f.to_string(), [&] { return expect_equal(f, b(f), a(f)); });
        }), jobs));
    }
    return out;
}

std::vector<IdentityResult> complex_suite(const ElasticityOps& ops, const std::string& label, int max_degree, unsigned jobs) {
    std::vector<IdentityResult> out;
    if (ops.dim == 3) {
        const FieldOp P1 = ops.p[0], P2 = ops.p[1], P3 = ops.p[2];
        out.push_back(check_probes<TensorField>(label + " P1∘P2 = 0", sym_probes(3, max_degree), Test<TensorField>([P1, P2](const TensorField& v) {
            return guarded(v.to_string(), [&] { return expect_zero(v, P1(P2(v))); });
        }), jobs));
        out.push_back(check_probes<TensorField>(label + " P2∘P3 = 0", vec_probes(3, max_degree), Test<TensorField>([P2, P3](const TensorField& v) {
            return guarded(v.to_string(), [&] { return expect_zero(v, P2(P3(v))); });
        }), jobs));
    } else {
        const FieldOp P1 = ops.p[0], P2 = ops.p[1];
        out.push_back(check_probes<TensorField>(label + " P1∘P2 = 0", vec_probes(2, max_degree), Test<TensorField>([P1, P2](const TensorField& v) {
            return guarded(v.to_string(), [&] { return expect_zero(v, P1(P2(v))); });
        }), jobs));
    }
    return out;
}

std::vector<IdentityResult> koszul_suite(int max_r, std::uint64_t seed, unsigned jobs) {
    std::vector<IdentityResult> out;
    const ElasticityOps p = printed_elasticity_ops(3);
    for (int which = 1; which <= 3; ++which) {
        std::vector<TensorField> probes;
        for (int r = 0; r <= max_r; ++r)
            for (auto& f : which == 3 ? vec_probes(3, r, r) : sym_probes(3, r, r)) probes.push_back(std::move(f));
        const FieldOp P = p.p[std::size_t(which - 1)];
        out.push_back(check_probes<TensorField>("K" + std::to_string(which) + "^r ≡ P" + std::to_string(which) + " on H_r, r ≤ " + std::to_string(max_r),
                                                probes, Test<TensorField>([which, P](const TensorField& f) {
                                                    return guarded(f.to_string(), [&] {
                                                        const int r = f.degree() < 0 ? 0 : f.degree();
                                                        return expect_equal(f, koszul_r(which, r, f), P(f));
                                                    });
                                                }),
                                                jobs));
    }
    {
        std::vector<TensorField> probes;
        for (int r = 0; r <= max_r; ++r)
            for (auto& f : vec_probes(3, r, r)) probes.push_back(std::move(f));
        out.push_back(check_probes<TensorField>("K2^{r+1}∘K3^r = 0", probes, Test<TensorField>([](const TensorField& v) {
            return guarded(v.to_string(), [&] {
                const int r = v.degree();
                return expect_zero(v, koszul_r(2, r + 1, koszul_r(3, r, v)));
            });
        }), jobs));
    }
    {
        std::vector<TensorField> probes;
        for (int r = 0; r <= max_r; ++r)
            for (auto& f : sym_probes(3, r, r)) probes.push_back(std::move(f));
        out.push_back(check_probes<TensorField>("K1^{r+2}∘K2^r = 0", probes, Test<TensorField>([](const TensorField& v) {
            return guarded(v.to_string(), [&] {
                const int r = v.degree();
                return expect_zero(v, koszul_r(1, r + 2, koszul_r(2, r, v)));
            });
        }), jobs));
    }
    {
        // Random homogeneous pairs; every pair gets its own stream.
        struct Pair {
            int r;
            TensorField e, v;
        };
        std::vector<Pair> pairs;
        const SplitMix64 root(seed);
        for (int r = 0; r <= max_r; ++r)
            for (int q = 0; q < 5; ++q) {
                SplitMix64 g = root.split(std::uint64_t(r * 16 + q));
                TensorField e = random_symmetric_field(3, r, g, r), v = random_symmetric_field(3, r, g, r);
                pairs.push_back({r, std::move(e), std::move(v)});
            }
        out.push_back(check_probes<Pair>("K2^r E : V = E : K2^r V", pairs, Test<Pair>([](const Pair& pr) {
            return guarded(pr.e.to_string(), [&]() -> Opt {
                const TensorField lhs = frobenius(koszul_r(2, pr.r, pr.e), pr.v), rhs = frobenius(pr.e, koszul_r(2, pr.r, pr.v));
                if (lhs == rhs) return std::nullopt;
                return describe_mismatch("E=" + pr.e.to_string() + ", V=" + pr.v.to_string(), lhs.to_string(), rhs.to_string());
            });
        }), jobs));
    }
    return out;
}

std::vector<IdentityResult> preservation_suite(const ElasticityOps& ops, const std::string& label, int max_r, unsigned jobs) {
    std::vector<IdentityResult> out;
    struct Map {
        std::string name;
        bool vector_input;
        int shift;
    };
    const std::vector<Map> maps = ops.dim == 3 ? std::vector<Map>{{"P1: H_r(S) → H_{r+1}(V)", false, 1},
                                                                  {"P2: H_r(S) → H_{r+2}(S)", false, 2},
                                                                  {"P3: H_r(V) → H_{r+1}(S)", true, 1}}
                                               : std::vector<Map>{{"P1: H_r(S) → H_{r+2}(R)", false, 2},
                                                                  {"P2: H_r(V) → H_{r+1}(S)", true, 1}};
    for (std::size_t i = 0; i < maps.size(); ++i) {
        std::vector<TensorField> probes;
        for (int r = 0; r <= max_r; ++r)
            for (auto& f : maps[i].vector_input ? vec_probes(ops.dim, r, r) : sym_probes(ops.dim, r, r)) probes.push_back(std::move(f));
        const FieldOp P = ops.p[i];
        const int shift = maps[i].shift;
        out.push_back(check_probes<TensorField>(label + " " + maps[i].name, probes, Test<TensorField>([P, shift](const TensorField& f) {
            return guarded(f.to_string(), [&]() -> Opt {
                const TensorField g = P(f);
                const int want = f.degree() + shift;
                if (g.is_zero() || g.is_homogeneous(want)) return std::nullopt;
                return "input " + f.to_string() + ": output " + g.to_string() + " is not in H_" + std::to_string(want);
            });
        }), jobs));
    }
    return out;
}

std::vector<IdentityResult> random_spot_checks(int dim, int max_degree, std::uint64_t seed, int count, unsigned jobs) {
    const ElasticityOps ops = printed_elasticity_ops(dim);
    const SplitMix64 root(seed);
    std::vector<TensorField> syms, vecs, scalars;
    for (int i = 0; i < count; ++i) {
        SplitMix64 g = root.split(std::uint64_t(i));
        syms.push_back(random_symmetric_field(dim, max_degree, g));
        vecs.push_back(random_vector_field(dim, max_degree, g));
        scalars.push_back(TensorField::scalar(random_poly(dim, max_degree, g)));
    }
    std::vector<IdentityResult> out;
    const std::string label = "random " + dimtag(dim);
    if (dim == 3) {
        const FieldOp P1 = ops.p[0], P2 = ops.p[1], P3 = ops.p[2];
        out.push_back(check_probes<TensorField>(label + " def∘P1∘def = def", vecs, Test<TensorField>([P1](const TensorField& u) {
            return guarded(u.to_string(), [&] { return expect_equal(u, def_op(P1(def_op(u))), def_op(u)); });
        }), jobs));
        out.push_back(check_probes<TensorField>(label + " P2∘inc + def∘P1 = id", syms, Test<TensorField>([P1, P2](const TensorField& e) {
            return guarded(e.to_string(), [&] { return expect_equal(e, P2(inc_op(e)) + def_op(P1(e)), e); });
        }), jobs));
        out.push_back(check_probes<TensorField>(label + " P3∘div + inc∘P2 = id", syms, Test<TensorField>([P2, P3](const TensorField& v) {
            return guarded(v.to_string(), [&] { return expect_equal(v, P3(div_rows(v)) + inc_op(P2(v)), v); });
        }), jobs));
        out.push_back(check_probes<TensorField>(label + " div∘P3 = id", vecs, Test<TensorField>([P3](const TensorField& v) {
            return guarded(v.to_string(), [&] { return expect_equal(v, div_rows(P3(v)), v); });
        }), jobs));
    } else {
        const FieldOp P1 = ops.p[0], P2 = ops.p[1];
        out.push_back(check_probes<TensorField>(label + " air∘P1∘air = air", scalars, Test<TensorField>([P1](const TensorField& u) {
            return guarded(u.to_string(), [&] { return expect_equal(u, air_op(P1(air_op(u))), air_op(u)); });
        }), jobs));
        out.push_back(check_probes<TensorField>(label + " P2∘div + air∘P1 = id", syms, Test<TensorField>([P1, P2](const TensorField& v) {
            return guarded(v.to_string(), [&] { return expect_equal(v, P2(div_rows(v)) + air_op(P1(v)), v); });
        }), jobs));
        out.push_back(check_probes<TensorField>(label + " div∘P2 = id", vecs, Test<TensorField>([P2](const TensorField& v) {
            return guarded(v.to_string(), [&] { return expect_equal(v, div_rows(P2(v)), v); });
        }), jobs));
    }
    return out;
}

void VerifyConfig::validate() const {
    if (dim != 2 && dim != 3) throw PreconditionError("dim must be 2 or 3");
    if (max_degree < 0) throw PreconditionError("max-degree must be non-negative");
    if (jobs == 0) throw PreconditionError("jobs must be at least 1");
}

VerifyOutcome run_verify(const VerifyConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const int d = cfg.dim, n = cfg.max_degree;
    const unsigned j = cfg.jobs;

    std::vector<IdentityResult> all;
    const auto add = [&all](std::vector<IdentityResult> rs) {
        for (auto& r : rs) all.push_back(std::move(r));
    };
    add(derham_suite(d, n, j));
    add(bgg_suite(d, n, j));
    const ElasticityOps derived_ops = derived_elasticity_ops(d);
    const ElasticityOps printed_ops = printed_elasticity_ops(d);
    add(elasticity_identities(derived_ops, "derived", n, j));
    add(elasticity_identities(printed_ops, "printed", n, j));
    add(conformance_suite(d, n, j));
    add(complex_suite(printed_ops, "printed", n, j));
    if (d == 3) add(koszul_suite(n, cfg.seed, j));
    add(preservation_suite(printed_ops, "printed", n, j));
    add(random_spot_checks(d, std::min(n, 4), cfg.seed, 20, j));

    const SignReport& signs = sign_report(d);
    VerifyOutcome out;
    out.pass = signs.resolved();
    nlohmann::json ids = nlohmann::json::array(), times = nlohmann::json::array();
    std::size_t failed = 0;
    for (const auto& r : all) {
        ids.push_back(r.to_json(false));
        times.push_back({{"name", r.name}, {"seconds", r.seconds}});
        if (!r.pass) ++failed;
    }
    out.pass = out.pass && failed == 0;
    auto& rep = out.report;
    rep["config"] = {{"dim", d}, {"max_degree", n}, {"seed", cfg.seed}};
    rep["conventions"] = convention_set();
    rep["sign_report"] = signs.to_json();
    rep["identities"] = std::move(ids);
    rep["summary"] = {{"total", all.size()}, {"passed", all.size() - failed}, {"failed", failed},
                      {"signs_resolved", signs.resolved()}};
    rep["status"] = out.pass ? "pass" : "fail";
    rep["timing"] = {{"jobs", j},
                     {"total_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                     {"identities", std::move(times)}};
    return out;
}

}  // namespace kroner
