#include "kroner/bgg.hpp"

#include <array>
#include <algorithm>
#include <map>
#include <mutex>

#include "kroner/diffcalc.hpp"
#include "kroner/errors.hpp"

namespace kroner {

namespace {

std::string sub(int k) {
    static const char* digits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
    return digits[k];
}

std::string sup(int k) {
    static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    return digits[k];
}

const Form& as_form(const Value& v) { return std::get<Form>(v); }
const WForm& as_wform(const Value& v) { return std::get<WForm>(v); }
const TensorField& as_field(const Value& v) { return std::get<TensorField>(v); }
const WPairField& as_pair(const Value& v) { return std::get<WPairField>(v); }

void require_vector_form(const Form& w, const char* op) {
    if (w.value_space() != ValueSpace::vector) throw ShapeError(std::string(op) + " acts on vector-valued forms");
}

}  // namespace

Form s_op(const Form& w) {
    require_vector_form(w, "S");
    if (w.degree() >= w.dim()) throw PreconditionError("S_k needs k < dim");
    return ext_d(k_form(w)) - k_form(ext_d(w));
}

Form t_op(const Form& w) {
    require_vector_form(w, "T");
    if (w.degree() == 0) throw PreconditionError("T_k needs k ≥ 1");
    return poincare(k_form(w)) - k_form(poincare(w));
}

// AlgebraicMap --------------------------------------------------------------

namespace {

Form unit_form(const Space& s, std::size_t basis, int comp, const Poly& value) {
    Form e(s.dim, s.k, s.vs);
    e.coeff(basis, comp) = value;
    return e;
}

}  // namespace

AlgebraicMap AlgebraicMap::probe(const std::function<Form(const Form&)>& op, const Space& in, const Space& out) {
    if (in.kind != SpaceKind::form || out.kind != SpaceKind::form) throw ShapeError("algebraic maps act on forms");
    AlgebraicMap m;
    m.in_ = in;
    m.out_ = out;
    const std::size_t nb_in = form_basis(in.dim, in.k).size(), nc_in = std::size_t(value_components(in.dim, in.vs));
    const std::size_t nb_out = form_basis(out.dim, out.k).size(), nc_out = std::size_t(value_components(out.dim, out.vs));
    m.cols_ = nb_in * nc_in;
    m.rows_ = nb_out * nc_out;
    m.m_.assign(m.rows_ * m.cols_, Rat(0));
    const Poly one = Poly::constant(in.dim, 1);
    for (std::size_t s = 0; s < nb_in; ++s)
        for (std::size_t c = 0; c < nc_in; ++c) {
            const Form r = op(unit_form(in, s, int(c), one));
            if (!Space::form(out.dim, out.k, out.vs).contains(Value(r)))
                throw ShapeError("probed operator left the declared output space");
            if (r.poly_degree() > 0) throw PreconditionError("operator is not algebraic: constant input gave a non-constant output");
            for (std::size_t t = 0; t < nb_out; ++t)
                for (std::size_t d = 0; d < nc_out; ++d)
                    m.m_[(t * nc_out + d) * m.cols_ + s * nc_in + c] = r.coeff(t, int(d)).coefficient(Exponent{});
        }
    return m;
}

Form AlgebraicMap::apply(const Form& w) const {
    if (!in_.contains(Value(w))) throw ShapeError("operand not in " + in_.label());
    Form out(out_.dim, out_.k, out_.vs);
    const std::size_t nc_in = std::size_t(value_components(in_.dim, in_.vs));
    const std::size_t nc_out = std::size_t(value_components(out_.dim, out_.vs));
    for (std::size_t r = 0; r < rows_; ++r) {
        Poly acc(out_.dim);
        for (std::size_t c = 0; c < cols_; ++c) {
            const Rat& a = m_[r * cols_ + c];
            if (a == 0) continue;
            const Poly& p = w.coeff(c / nc_in, int(c % nc_in));
            if (!p.is_zero()) acc += a * p;
        }
        out.coeff(r / nc_out, int(r % nc_out)) = std::move(acc);
    }
    return out;
}

AlgebraicMap AlgebraicMap::inverse() const {
    if (rows_ != cols_) throw PreconditionError("non-square algebraic map has no inverse");
    const std::size_t n = rows_;
    std::vector<Rat> a = m_;
    std::vector<Rat> inv(n * n, Rat(0));
    for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv * n + col] == 0) ++piv;
        if (piv == n) throw PreconditionError("algebraic map is singular");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a[piv * n + j], a[col * n + j]);
                std::swap(inv[piv * n + j], inv[col * n + j]);
            }
        const Rat p = a[col * n + col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col * n + j] /= p;
            inv[col * n + j] /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a[i * n + col] == 0) continue;
            const Rat f = a[i * n + col];
            for (std::size_t j = 0; j < n; ++j) {
                a[i * n + j] -= f * a[col * n + j];
                inv[i * n + j] -= f * inv[col * n + j];
            }
        }
    }
    AlgebraicMap r;
    r.in_ = out_;
    r.out_ = in_;
    r.rows_ = n;
    r.cols_ = n;
    r.m_ = std::move(inv);
    return r;
}

bool AlgebraicMap::is_algebraic(const std::function<Form(const Form&)>& op, const std::vector<Poly>& multipliers) const {
    const std::size_t nb = form_basis(in_.dim, in_.k).size(), nc = std::size_t(value_components(in_.dim, in_.vs));
    for (const auto& p : multipliers)
        for (std::size_t s = 0; s < nb; ++s)
            for (std::size_t c = 0; c < nc; ++c) {
                const Form e = unit_form(in_, s, int(c), p);
                if (!(op(e) == apply(e))) return false;
            }
    return true;
}

const AlgebraicMap& s_matrix(int dim, int k) {
    if ((dim != 2 && dim != 3) || k < 0 || k >= dim) throw ShapeError("S_k needs 0 ≤ k < dim");
    static std::array<std::array<std::once_flag, 3>, 2> once;
    static std::array<std::array<AlgebraicMap, 3>, 2> cache;
    auto& slot = cache[std::size_t(dim - 2)][std::size_t(k)];
    std::call_once(once[std::size_t(dim - 2)][std::size_t(k)], [&] {
        AlgebraicMap m = AlgebraicMap::probe(s_op, Space::form(dim, k, ValueSpace::vector),
                                             Space::form(dim, k + 1, ValueSpace::skew));
        std::vector<Poly> mult;
        for (const auto& e : Poly::monomials_up_to(dim, 2)) mult.push_back(Poly::monomial(dim, e));
        if (!m.is_algebraic(s_op, mult)) throw PreconditionError("S_k failed the algebraic-operator check");
        slot = std::move(m);
    });
    return slot;
}

int s_invertible_degree(int dim) { return dim == 3 ? 1 : 0; }

const AlgebraicMap& s_invertible(int dim) { return s_matrix(dim, s_invertible_degree(dim)); }

const AlgebraicMap& s_invertible_inverse(int dim) {
    static std::array<std::once_flag, 2> once;
    static std::array<AlgebraicMap, 2> cache;
    if (dim != 2 && dim != 3) throw ShapeError("dimension must be 2 or 3");
    std::call_once(once[std::size_t(dim - 2)], [&] { cache[std::size_t(dim - 2)] = s_invertible(dim).inverse(); });
    return cache[std::size_t(dim - 2)];
}

WForm a_op(const WForm& w) {
    if (w.degree() >= w.dim()) throw PreconditionError("𝒜_k needs k < dim");
    return WForm(ext_d(w.skew) - s_matrix(w.dim(), w.degree()).apply(w.vec), ext_d(w.vec));
}

WForm b_op(const WForm& w) {
    if (w.degree() == 0) throw PreconditionError("ℬ_k needs k ≥ 1");
    return WForm(poincare(w.skew) - t_op(w.vec), poincare(w.vec));
}

// Primitive expressions ------------------------------------------------------

LinOpExpr op_d(int dim, int k, ValueSpace vs) {
    return LinOpExpr::primitive("d", Space::form(dim, k, vs), Space::form(dim, k + 1, vs),
                                [](const Value& v) -> Value { return ext_d(as_form(v)); });
}

LinOpExpr op_p(int dim, int k, ValueSpace vs) {
    return LinOpExpr::primitive("𝔭", Space::form(dim, k, vs), Space::form(dim, k - 1, vs),
                                [](const Value& v) -> Value { return poincare(as_form(v)); },
                                "∫₀¹ t^" + std::to_string(k - 1) + " i_x(·)_tx dt");
}

LinOpExpr op_kappa(int dim, int k, ValueSpace vs) {
    return LinOpExpr::primitive("κ", Space::form(dim, k, vs), Space::form(dim, k - 1, vs),
                                [](const Value& v) -> Value { return koszul(as_form(v)); }, "i_x");
}

LinOpExpr op_K(int dim, int k) {
    return LinOpExpr::primitive("K", Space::form(dim, k, ValueSpace::vector), Space::form(dim, k, ValueSpace::skew),
                                [](const Value& v) -> Value { return k_form(as_form(v)); }, "(x⊗· - ·⊗x)");
}

LinOpExpr op_S(int dim, int k) {
    return LinOpExpr::primitive("S" + sub(k), Space::form(dim, k, ValueSpace::vector),
                                Space::form(dim, k + 1, ValueSpace::skew),
                                [](const Value& v) -> Value { return s_op(as_form(v)); }, "(dK - Kd)");
}

LinOpExpr op_T(int dim, int k) {
    return LinOpExpr::primitive("T" + sub(k), Space::form(dim, k, ValueSpace::vector),
                                Space::form(dim, k - 1, ValueSpace::skew),
                                [](const Value& v) -> Value { return t_op(as_form(v)); }, "(𝔭K - K𝔭)");
}

LinOpExpr op_S_inv(int dim) {
    const int k = s_invertible_degree(dim);
    return LinOpExpr::primitive("S" + sub(k) + "⁻¹", Space::form(dim, k + 1, ValueSpace::skew),
                                Space::form(dim, k, ValueSpace::vector),
                                [dim](const Value& v) -> Value { return s_invertible_inverse(dim).apply(as_form(v)); },
                                dim == 3 ? "[U ↦ Uᵀ - ½tr(U)I]" : "[(a,b) ↦ (b,-a)]");
}

ABBlocks ab_blocks(int dim, int k) {
    if ((dim != 2 && dim != 3) || k < 0 || k > dim) throw ShapeError("block index out of range");
    ABBlocks r;
    if (k < dim)
        r.a = LinOpExpr::block(op_d(dim, k, ValueSpace::skew), -op_S(dim, k),
                               LinOpExpr::zero(Space::form(dim, k, ValueSpace::skew), Space::form(dim, k + 1, ValueSpace::vector)),
                               op_d(dim, k, ValueSpace::vector), Space::wform(dim, k), Space::wform(dim, k + 1));
    if (k > 0)
        r.b = LinOpExpr::block(op_p(dim, k, ValueSpace::skew), -op_T(dim, k),
                               LinOpExpr::zero(Space::form(dim, k, ValueSpace::skew), Space::form(dim, k - 1, ValueSpace::vector)),
                               op_p(dim, k, ValueSpace::vector), Space::wform(dim, k), Space::wform(dim, k - 1));
    return r;
}

// Γ ---------------------------------------------------------------------------

bool GammaPair::holds(const WForm& w, Kind k) {
    const int n = w.dim();
    if (k == Kind::second) return w.skew.is_zero() && w.degree() == s_invertible_degree(n) + 1;
    if (w.degree() != s_invertible_degree(n)) return false;
    return w.vec == s_invertible_inverse(n).apply(ext_d(w.skew));
}

GammaPair::GammaPair(WForm w, Kind k) : pair(std::move(w)), kind(k) {
    if (!holds(pair, kind))
        throw PreconditionError(kind == Kind::graph ? "pair is not of the form (ω, S⁻¹dω)" : "pair has a nonzero first component");
}

namespace {

Space gamma_space(int dim, GammaPair::Kind kind) {
    const int k = s_invertible_degree(dim) + (kind == GammaPair::Kind::second ? 1 : 0);
    return Space::wform(dim, k).subspace("Γ" + sup(k), [kind](const Value& v) {
        return std::holds_alternative<WForm>(v) && GammaPair::holds(std::get<WForm>(v), kind);
    });
}

}  // namespace

// Homotopy transfer ------------------------------------------------------------

std::optional<std::string> check_homotopy(const Row& row) {
    const std::size_t n = row.spaces.size() - 1;
    for (std::size_t i = 0; i <= n; ++i) {
        for (const auto& b : row.probes[i]) {
            std::optional<Value> lhs;
            auto add = [&](Value v) { lhs = lhs ? *lhs + v : std::move(v); };
            if (i < n && row.p[i + 1]) add((*row.p[i + 1])(row.d[i](b)));
            if (i >= 1 && row.p[i]) add(row.d[i - 1]((*row.p[i])(b)));
            if (!lhs) continue;
            const Value diff = *lhs - b;
            const bool ok = i == 0 ? value_is_zero(row.d[0](diff)) : value_is_zero(diff);
            if (!ok) return row.name + " level " + std::to_string(i) + ": " + value_to_string(b);
        }
    }
    return std::nullopt;
}

Row homotopy_transfer(const Row& top, const std::string& name, const std::vector<LinOpExpr>& proj,
                      const std::vector<LinOpExpr>& lift, std::vector<std::optional<LinOpExpr>> d_bottom,
                      TransferStats* stats) {
    const std::size_t n = top.spaces.size() - 1;
    if (proj.size() != n + 1 || lift.size() != n + 1) throw ShapeError("projection/lift family has the wrong length");
    d_bottom.resize(n);
    Row bot;
    bot.name = name;
    TransferStats st;
    st.step = top.name + " → " + name;
    for (std::size_t i = 0; i <= n; ++i) bot.spaces.push_back(proj[i].out());
    for (std::size_t i = 0; i < n; ++i)
        bot.d.push_back(d_bottom[i] ? *d_bottom[i] : compose_chain({proj[i + 1], top.d[i], lift[i]}).simplified());
    bot.probes.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        for (const auto& t : top.probes[i]) {
            Value b = proj[i](t);
            if (!value_is_zero(b)) bot.probes[i].push_back(std::move(b));
        }
    auto fail = [&](const std::string& what, std::size_t i, const Value& v) {
        throw CommutationError(st.step + ": " + what + " at level " + std::to_string(i), value_to_string(v));
    };
    for (std::size_t i = 0; i <= n; ++i) {
        for (const auto& b : bot.probes[i]) {
            ++st.checks;
            if (!value_equal(proj[i](lift[i](b)), b)) fail("Π∘Π† ≠ id", i, b);
            if (i < n) {
                ++st.checks;
                if (!value_equal(top.d[i](lift[i](b)), lift[i + 1](bot.d[i](b)))) fail("d∘Π† ≠ Π†∘d", i, b);
            }
        }
        if (i < n)
            for (const auto& t : top.probes[i]) {
                ++st.checks;
                if (!value_equal(proj[i + 1](top.d[i](t)), bot.d[i](proj[i](t)))) fail("Π∘d ≠ d∘Π", i, t);
            }
        st.probes += bot.probes[i].size();
    }
    bot.p.assign(n + 1, std::nullopt);
    for (std::size_t i = 1; i <= n; ++i)
        if (top.p[i]) bot.p[i] = compose_chain({proj[i - 1], *top.p[i], lift[i]}).simplified();
    if (auto bad = check_homotopy(bot)) throw CommutationError(st.step + ": transferred homotopy identity fails", *bad);
    if (stats) *stats = st;
    return bot;
}

// Probe bases ------------------------------------------------------------------

std::vector<Form> monomial_forms(int dim, int k, ValueSpace vs, int max_degree, int min_degree) {
    std::vector<Form> out;
    const std::size_t nb = form_basis(dim, k).size();
    const int nc = value_components(dim, vs);
    for (const auto& e : Poly::monomials_up_to(dim, max_degree)) {
        if (total_degree(e) < min_degree) continue;
        for (std::size_t s = 0; s < nb; ++s)
            for (int c = 0; c < nc; ++c) {
                Form w(dim, k, vs);
                w.coeff(s, c) = Poly::monomial(dim, e);
                out.push_back(std::move(w));
            }
    }
    return out;
}

std::vector<Value> monomial_wforms(int dim, int k, int max_degree) {
    std::vector<Value> out;
    for (auto& f : monomial_forms(dim, k, ValueSpace::skew, max_degree))
        out.emplace_back(WForm(std::move(f), Form(dim, k, ValueSpace::vector)));
    for (auto& f : monomial_forms(dim, k, ValueSpace::vector, max_degree))
        out.emplace_back(WForm(Form(dim, k, ValueSpace::skew), std::move(f)));
    return out;
}

std::vector<TensorField> monomial_fields(int dim, Shape shape, Symmetry sym, int max_degree, int min_degree) {
    std::vector<TensorField> out;
    for (const auto& e : Poly::monomials_up_to(dim, max_degree)) {
        if (total_degree(e) < min_degree) continue;
        const Poly m = Poly::monomial(dim, e);
        switch (shape) {
            case Shape::scalar: out.push_back(TensorField::scalar(m)); break;
            case Shape::vector:
                for (int i = 0; i < dim; ++i) out.push_back(m * TensorField::unit_vector(dim, i));
                break;
            case Shape::matrix:
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j) {
                        if (sym != Symmetry::none && j < i) continue;
                        if (sym == Symmetry::skew && i == j) continue;
                        std::vector<Poly> ent(std::size_t(dim * dim), Poly(dim));
                        ent[std::size_t(i * dim + j)] = m;
                        if (sym == Symmetry::symmetric) ent[std::size_t(j * dim + i)] = m;
                        if (sym == Symmetry::skew) ent[std::size_t(j * dim + i)] = -m;
                        out.push_back(TensorField::matrix(dim, std::move(ent), sym));
                    }
                break;
        }
    }
    return out;
}

// Derivation ---------------------------------------------------------------------

namespace {

LinOpExpr prim(std::string sym, Space in, Space out, LinOpExpr::Fn fn, std::string formula = {}) {
    return LinOpExpr::primitive(std::move(sym), std::move(in), std::move(out), std::move(fn), std::move(formula));
}

Row top_row(int dim, int probe_degree) {
    Row r;
    r.name = "Λ(W)";
    r.p.assign(std::size_t(dim + 1), std::nullopt);
    for (int k = 0; k <= dim; ++k) {
        r.spaces.push_back(Space::wform(dim, k));
        auto ab = ab_blocks(dim, k);
        if (ab.a) r.d.push_back(*ab.a);
        if (ab.b) r.p[std::size_t(k)] = *ab.b;
        r.probes.push_back(monomial_wforms(dim, k, probe_degree));
    }
    return r;
}

LinOpExpr zero_op(const Space& a, const Space& b) { return LinOpExpr::zero(a, b); }

/// Projection onto the graph subspace: (ω, μ) ↦ (ω, S⁻¹dω).
LinOpExpr proj_graph(int dim) {
    const int k = s_invertible_degree(dim);
    const Space ks = Space::form(dim, k, ValueSpace::skew), vs = Space::form(dim, k, ValueSpace::vector);
    return LinOpExpr::block(LinOpExpr::identity(ks), zero_op(vs, ks), compose(op_S_inv(dim), op_d(dim, k, ValueSpace::skew)),
                            zero_op(vs, vs), Space::wform(dim, k), gamma_space(dim, GammaPair::Kind::graph));
}

/// Projection onto the second-component subspace: (ω, μ) ↦ (0, μ + d S⁻¹ω).
LinOpExpr proj_second(int dim) {
    const int k = s_invertible_degree(dim) + 1;
    const Space ks = Space::form(dim, k, ValueSpace::skew), vs = Space::form(dim, k, ValueSpace::vector);
    return LinOpExpr::block(zero_op(ks, ks), zero_op(vs, ks), compose(op_d(dim, k - 1, ValueSpace::vector), op_S_inv(dim)),
                            LinOpExpr::identity(vs), Space::wform(dim, k), gamma_space(dim, GammaPair::Kind::second));
}

LinOpExpr inclusion(const Space& sub, const Space& whole) {
    return prim("ι", sub, whole, [](const Value& v) { return v; });
}

LinOpExpr first_part(int dim) {
    const int k = s_invertible_degree(dim);
    return prim("π_K", gamma_space(dim, GammaPair::Kind::graph), Space::form(dim, k, ValueSpace::skew),
                [](const Value& v) -> Value { return as_wform(v).skew; });
}

LinOpExpr graph_lift(int dim) {
    const int k = s_invertible_degree(dim);
    return prim("γ", Space::form(dim, k, ValueSpace::skew), gamma_space(dim, GammaPair::Kind::graph),
                [dim](const Value& v) -> Value {
                    const Form& w = as_form(v);
                    return WForm(w, s_invertible_inverse(dim).apply(ext_d(w)));
                },
                "(·, S" + sub(k) + "⁻¹d·)");
}

LinOpExpr second_part(int dim) {
    const int k = s_invertible_degree(dim) + 1;
    return prim("π_V", gamma_space(dim, GammaPair::Kind::second), Space::form(dim, k, ValueSpace::vector),
                [](const Value& v) -> Value { return as_wform(v).vec; });
}

LinOpExpr second_lift(int dim) {
    const int k = s_invertible_degree(dim) + 1;
    return prim("(0,·)", Space::form(dim, k, ValueSpace::vector), gamma_space(dim, GammaPair::Kind::second),
                [dim, k](const Value& v) -> Value { return WForm(Form(dim, k, ValueSpace::skew), as_form(v)); });
}

LinOpExpr proxy_op(const std::string& sym, int dim, int k, ValueSpace vs, Shape shape) {
    return prim(sym, Space::form(dim, k, vs), Space::field(dim, shape),
                [](const Value& v) -> Value { return proxy(as_form(v)); });
}

LinOpExpr unproxy_op(const std::string& sym, int dim, int k, ValueSpace vs, Shape shape) {
    return prim(sym, Space::field(dim, shape), Space::form(dim, k, vs),
                [k, vs](const Value& v) -> Value { return unproxy(as_field(v), k, vs); });
}

LinOpExpr sym_op(int dim) {
    return prim("sym", Space::field(dim, Shape::matrix), Space::field(dim, Shape::matrix, Symmetry::symmetric),
                [](const Value& v) -> Value { return sym(as_field(v)); });
}

LinOpExpr sym_inclusion(int dim) {
    return prim("ι", Space::field(dim, Shape::matrix, Symmetry::symmetric), Space::field(dim, Shape::matrix),
                [](const Value& v) -> Value { return as_field(v).with_symmetry(Symmetry::none); });
}

/// (W, v) ↦ v - ½ div W.
LinOpExpr top_projection(int dim) {
    return prim("(v - ½div W)", Space::wpair(dim), Space::field(dim, Shape::vector),
                [](const Value& v) -> Value {
                    const auto& p = as_pair(v);
                    return p.vec - Rat(1, 2) * div_rows(p.skew);
                });
}

LinOpExpr top_lift(int dim) {
    return prim("(0,·)", Space::field(dim, Shape::vector), Space::wpair(dim), [dim](const Value& v) -> Value {
        return WPairField(TensorField::zero(dim, Shape::matrix, Symmetry::skew), as_field(v));
    });
}

LinOpExpr field_op(const std::string& sym, const Space& in, const Space& out, TensorField (*f)(const TensorField&)) {
    return prim(sym, in, out, [f](const Value& v) -> Value { return f(as_field(v)); });
}

Derivation derive3(int probe_degree) {
    Derivation dv;
    dv.dim = 3;
    const int n = 3;
    Row row1 = top_row(n, probe_degree);
    TransferStats st;

    // Γ row: Λ⁰(W), Γ¹, Γ², Λ³(W)
    const Space g1 = gamma_space(n, GammaPair::Kind::graph), g2 = gamma_space(n, GammaPair::Kind::second);
    Row row2 = homotopy_transfer(row1, "Γ", {LinOpExpr::identity(Space::wform(n, 0)), proj_graph(n), proj_second(n),
                                             LinOpExpr::identity(Space::wform(n, 3))},
                                 {LinOpExpr::identity(Space::wform(n, 0)), inclusion(g1, Space::wform(n, 1)),
                                  inclusion(g2, Space::wform(n, 2)), LinOpExpr::identity(Space::wform(n, 3))},
                                 {}, &st);
    dv.steps.push_back(st);

    // Λ⁰(W), Λ¹(K), Λ²(V), Λ³(W)
    Row row3 = homotopy_transfer(row2, "Λ(K)/Λ(V)",
                                 {LinOpExpr::identity(Space::wform(n, 0)), first_part(n), second_part(n),
                                  LinOpExpr::identity(Space::wform(n, 3))},
                                 {LinOpExpr::identity(Space::wform(n, 0)), graph_lift(n), second_lift(n),
                                  LinOpExpr::identity(Space::wform(n, 3))},
                                 {}, &st);
    dv.steps.push_back(st);

    // Vector proxies J₀..J₃
    const LinOpExpr j0 = prim("J₀", Space::wform(n, 0), Space::wpair(n), [](const Value& v) -> Value { return j0_proxy(as_wform(v)); });
    const LinOpExpr j0i = prim("J₀⁻¹", Space::wpair(n), Space::wform(n, 0), [](const Value& v) -> Value { return j0_unproxy(as_pair(v)); });
    const LinOpExpr j3 = prim("J₃", Space::wform(n, 3), Space::wpair(n), [](const Value& v) -> Value { return jtop_proxy(as_wform(v)); });
    const LinOpExpr j3i = prim("J₃⁻¹", Space::wpair(n), Space::wform(n, 3), [](const Value& v) -> Value { return jtop_unproxy(as_pair(v)); });
    Row row4 = homotopy_transfer(row3, "proxies",
                                 {j0, proxy_op("J₁", n, 1, ValueSpace::skew, Shape::matrix),
                                  proxy_op("J₂", n, 2, ValueSpace::vector, Shape::matrix), j3},
                                 {j0i, unproxy_op("J₁⁻¹", n, 1, ValueSpace::skew, Shape::matrix),
                                  unproxy_op("J₂⁻¹", n, 2, ValueSpace::vector, Shape::matrix), j3i},
                                 {}, &st);
    dv.steps.push_back(st);

    // Elasticity row: C(V) → C(S) → C(S) → C(V)
    const Space cv = Space::field(n, Shape::vector), cs = Space::field(n, Shape::matrix, Symmetry::symmetric);
    const LinOpExpr pu = prim("(u,W) ↦ u", Space::wpair(n), cv, [](const Value& v) -> Value { return as_pair(v).vec; });
    const LinOpExpr lu = prim("(·, skw∇·)", cv, Space::wpair(n), [](const Value& v) -> Value {
        const auto& u = as_field(v);
        return WPairField(skw(grad(u)), u);
    });
    Row row5 = homotopy_transfer(row4, "elasticity", {pu, sym_op(n), sym_op(n), top_projection(n)},
                                 {lu, sym_inclusion(n), sym_inclusion(n), top_lift(n)},
                                 {field_op("def", cv, cs, def_op), field_op("inc", cs, cs, inc_op),
                                  field_op("div", cs, cv, div_rows)},
                                 &st);
    dv.steps.push_back(st);
    for (int i = 1; i <= n; ++i) dv.operators.push_back(*row5.p[std::size_t(i)]);
    dv.rows = {std::move(row1), std::move(row2), std::move(row3), std::move(row4), std::move(row5)};
    return dv;
}

Derivation derive2(int probe_degree) {
    Derivation dv;
    dv.dim = 2;
    const int n = 2;
    Row row1 = top_row(n, probe_degree);
    TransferStats st;

    // Γ⁰, Γ¹, Λ²(W)
    const Space g0 = gamma_space(n, GammaPair::Kind::graph), g1 = gamma_space(n, GammaPair::Kind::second);
    Row row2 = homotopy_transfer(row1, "Γ", {proj_graph(n), proj_second(n), LinOpExpr::identity(Space::wform(n, 2))},
                                 {inclusion(g0, Space::wform(n, 0)), inclusion(g1, Space::wform(n, 1)),
                                  LinOpExpr::identity(Space::wform(n, 2))},
                                 {}, &st);
    dv.steps.push_back(st);

    // Λ⁰(K), Λ¹(V), Λ²(W)
    Row row3 = homotopy_transfer(row2, "Λ(K)/Λ(V)", {first_part(n), second_part(n), LinOpExpr::identity(Space::wform(n, 2))},
                                 {graph_lift(n), second_lift(n), LinOpExpr::identity(Space::wform(n, 2))}, {}, &st);
    dv.steps.push_back(st);

    const LinOpExpr j2 = prim("J₂", Space::wform(n, 2), Space::wpair(n), [](const Value& v) -> Value { return jtop_proxy(as_wform(v)); });
    const LinOpExpr j2i = prim("J₂⁻¹", Space::wpair(n), Space::wform(n, 2), [](const Value& v) -> Value { return jtop_unproxy(as_pair(v)); });
    Row row4 = homotopy_transfer(row3, "proxies",
                                 {proxy_op("J₀", n, 0, ValueSpace::skew, Shape::scalar),
                                  proxy_op("J₁", n, 1, ValueSpace::vector, Shape::matrix), j2},
                                 {unproxy_op("J₀⁻¹", n, 0, ValueSpace::skew, Shape::scalar),
                                  unproxy_op("J₁⁻¹", n, 1, ValueSpace::vector, Shape::matrix), j2i},
                                 {}, &st);
    dv.steps.push_back(st);

    const Space cr = Space::field(n, Shape::scalar), cv = Space::field(n, Shape::vector),
                cs = Space::field(n, Shape::matrix, Symmetry::symmetric);
    Row row5 = homotopy_transfer(row4, "elasticity", {LinOpExpr::identity(cr), sym_op(n), top_projection(n)},
                                 {LinOpExpr::identity(cr), sym_inclusion(n), top_lift(n)},
                                 {field_op("air", cr, cs, air_op), field_op("div", cs, cv, div_rows)}, &st);
    dv.steps.push_back(st);
    for (int i = 1; i <= n; ++i) dv.operators.push_back(*row5.p[std::size_t(i)]);
    dv.rows = {std::move(row1), std::move(row2), std::move(row3), std::move(row4), std::move(row5)};
    return dv;
}

}  // namespace

Derivation derive_elasticity_poincare(int dim, int probe_degree) {
    if (probe_degree < 0) throw PreconditionError("probe degree must be non-negative");
    if (dim == 3) return derive3(probe_degree);
    if (dim == 2) return derive2(probe_degree);
    throw ShapeError("derivation is available for dimensions 2 and 3");
}

const Derivation& derived(int dim) {
    static std::array<std::once_flag, 2> once;
    static std::array<Derivation, 2> cache;
    if (dim != 2 && dim != 3) throw ShapeError("dimension must be 2 or 3");
    std::call_once(once[std::size_t(dim - 2)], [&] { cache[std::size_t(dim - 2)] = derive_elasticity_poincare(dim, 3); });
    return cache[std::size_t(dim - 2)];
}

// Sign resolution ------------------------------------------------------------------

std::string convention_set() {
    return "(u∧M)_ij = ε_iab u_a M_bj; (M∧u)_ij = ε_jab M_ia u_b; "
           "(∇×M)_ij = ε_iab ∂_a M_bj; (M×∇)_ij = ε_jab ∂_a M_ib; "
           "(div M)_i = ∂_j M_ij; (∇u)_ij = ∂_j u_i; inc E = (∇×E)×∇; "
           "2D: f×∇ = (∂₂f, -∂₁f), x⊥ = (x₂, -x₁), air u = (u×∇)×∇; "
           "Skw(w)·a = w∧a; 2D skew uχ with χ = [[0,-1],[1,0]]; "
           "F_tx denotes F evaluated at tx";
}

bool SignReport::resolved() const {
    if (assignments_matching != 1) return false;
    for (const auto& s : slots)
        if (s.status != "resolved") return false;
    return true;
}

std::optional<int> SignReport::sign(const std::string& slot) const {
    for (const auto& s : slots)
        if (s.slot == slot && s.status == "resolved") return s.resolved_sign;
    return std::nullopt;
}

nlohmann::json SignReport::to_json() const {
    nlohmann::json j;
    j["dim"] = dim;
    j["probe_degree"] = probe_degree;
    j["conventions"] = conventions;
    j["status"] = resolved() ? "resolved" : (assignments_matching == 0 ? "no assignment" : "ambiguous");
    j["assignments_tested"] = assignments_tested;
    j["assignments_matching"] = assignments_matching;
    j["slots"] = nlohmann::json::array();
    for (const auto& s : slots) {
        nlohmann::json e{{"slot", s.slot}, {"operator", s.op}, {"probe_degree", s.probe_degree}, {"status", s.status}};
        e["resolved_sign"] = s.status == "resolved" ? nlohmann::json(s.resolved_sign) : nlohmann::json(nullptr);
        e["candidates"] = s.candidates;
        j["slots"].push_back(std::move(e));
    }
    j["diff"] = nlohmann::json::array();
    for (const auto& [op, d] : diffs) j["diff"].push_back({{"operator", op}, {"detail", d}});
    return j;
}

SignReport resolve_signs(int dim, int probe_degree, const std::vector<LinOpExpr>& derived_ops,
                         const std::vector<SlottedOperator>& printed) {
    if (derived_ops.size() != printed.size()) throw ShapeError("derived and printed operator lists differ in length");
    SignReport rep;
    rep.dim = dim;
    rep.probe_degree = probe_degree;
    rep.conventions = convention_set();

    // match[j][c]: printed operator j with local sign choice c equals derived on all probes.
    std::vector<std::vector<bool>> match(printed.size());
    for (std::size_t j = 0; j < printed.size(); ++j) {
        const auto& op = printed[j];
        const std::size_t nloc = std::size_t(1) << op.slots.size();
        std::vector<Value> want;
        want.reserve(op.probes.size());
        for (const auto& p : op.probes) want.push_back(derived_ops[j](p));
        match[j].assign(nloc, true);
        for (std::size_t c = 0; c < nloc; ++c) {
            std::vector<int> signs;
            std::string label;
            for (std::size_t s = 0; s < op.slots.size(); ++s) {
                signs.push_back((c >> s) & 1 ? -1 : 1);
                label += (s ? "," : "") + op.slots[s] + "=" + (signs.back() > 0 ? "+1" : "-1");
            }
            for (std::size_t q = 0; q < op.probes.size(); ++q) {
                const Value got = op.eval(op.probes[q], signs);
                if (!value_equal(got, want[q])) {
                    match[j][c] = false;
                    rep.diffs.emplace_back(op.id, (label.empty() ? std::string("no slots") : label) + ": input " +
                                                      value_to_string(op.probes[q]) + " derived " +
                                                      value_to_string(want[q]) + " printed " + value_to_string(got));
                    break;
                }
            }
        }
    }

    // Global enumeration over all slot vectors.
    std::size_t total_slots = 0;
    for (const auto& op : printed) total_slots += op.slots.size();
    const std::size_t nglob = std::size_t(1) << total_slots;
    rep.assignments_tested = nglob;
    std::vector<std::vector<int>> cand(total_slots);
    for (std::size_t g = 0; g < nglob; ++g) {
        std::size_t bit = 0;
        bool ok = true;
        for (std::size_t j = 0; j < printed.size() && ok; ++j) {
            const std::size_t ns = printed[j].slots.size();
            const std::size_t local = (g >> bit) & ((std::size_t(1) << ns) - 1);
            ok = match[j][local];
            bit += ns;
        }
        if (!ok) continue;
        ++rep.assignments_matching;
        for (std::size_t s = 0; s < total_slots; ++s) {
            const int v = (g >> s) & 1 ? -1 : 1;
            if (std::find(cand[s].begin(), cand[s].end(), v) == cand[s].end()) cand[s].push_back(v);
        }
    }
    std::size_t s = 0;
    for (const auto& op : printed)
        for (const auto& name : op.slots) {
            SlotResult r;
            r.slot = name;
            r.op = op.id;
            r.probe_degree = probe_degree;
            std::sort(cand[s].begin(), cand[s].end());
            r.candidates = cand[s];
            if (rep.assignments_matching == 0) r.status = "no assignment";
            else if (cand[s].size() > 1) r.status = "ambiguous";
            else {
                r.status = "resolved";
                r.resolved_sign = cand[s].front();
            }
            rep.slots.push_back(std::move(r));
            ++s;
        }
    return rep;
}

}  // namespace kroner
