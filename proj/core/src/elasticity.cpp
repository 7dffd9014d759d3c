#include "kroner/elasticity.hpp"

#include <array>
#include <mutex>

#include "kroner/diffcalc.hpp"
#include "kroner/errors.hpp"

namespace kroner {

std::string to_string(OperatorId id) {
    static const char* names[] = {"P1", "P2", "P3", "P1_2D", "P2_2D", "K1", "K2", "K3"};
    return names[int(id)];
}

OperatorId parse_operator_id(const std::string& s) {
    for (int i = 0; i <= int(OperatorId::K3); ++i)
        if (to_string(OperatorId(i)) == s) return OperatorId(i);
    throw ParseError("unknown operator '" + s + "' (expected P1, P2, P3, P1_2D, P2_2D, K1, K2 or K3)");
}

namespace {

TensorField radial(const TensorField& f, unsigned a, unsigned b) {
    return f.map([a, b](const Poly& p) { return radial_beta_transform(p, a, b); });
}

TensorField translate_field(const TensorField& f, std::span<const Rat> c) {
    return f.map([c](const Poly& p) { return p.translate(c); });
}

template <class Fn>
TensorField conjugate(const TensorField& f, const BasePoint& x0, Fn fn) {
    if (x0.is_origin()) return fn(f);
    if (int(x0.coords.size()) != f.dim()) throw ShapeError("base point dimension does not match the field");
    std::vector<Rat> minus(x0.coords.size());
    for (std::size_t i = 0; i < minus.size(); ++i) minus[i] = -x0.coords[i];
    return translate_field(fn(translate_field(f, x0.coords)), minus);
}

void require_sym_matrix(const TensorField& f, int dim, const char* op) {
    if (f.shape() != Shape::matrix || f.dim() != dim)
        throw ShapeError(std::string(op) + " expects a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix field");
    if (!f.satisfies(Symmetry::symmetric)) throw SymmetryError(std::string(op) + " expects a symmetric field");
}

void require_vector(const TensorField& f, int dim, const char* op) {
    if (f.shape() != Shape::vector || f.dim() != dim)
        throw ShapeError(std::string(op) + " expects a " + std::to_string(dim) + "D vector field");
}

void require_sign(int s) {
    if (s != 1 && s != -1) throw PreconditionError("sign must be +1 or -1");
}

int need(const std::optional<int>& s, const char* slot) {
    if (!s) throw PreconditionError(std::string("sign slot ") + slot + " is unresolved");
    return *s;
}

Rat rat(int s) { return Rat(s); }

}  // namespace

// Closed forms -------------------------------------------------------------------

TensorField p1_signed(const TensorField& e, int sigma1) {
    require_sym_matrix(e, 3, "P1");
    require_sign(sigma1);
    const TensorField x = TensorField::position(3);
    const TensorField frank = radial(curl_cols(e), 0, 1);
    return matvec(radial(e, 0, 0), x) + rat(sigma1) * matvec(cross_left(x, frank), x);
}

TensorField p2_signed(const TensorField& v, int sigma2) {
    require_sym_matrix(v, 3, "P2");
    require_sign(sigma2);
    const TensorField x = TensorField::position(3);
    return (rat(sigma2) * cross_right(cross_left(x, radial(v, 1, 1)), x)).with_symmetry(Symmetry::symmetric);
}

TensorField p3_signed(const TensorField& v, int sigma3) {
    require_vector(v, 3, "P3");
    require_sign(sigma3);
    const TensorField x = TensorField::position(3);
    const TensorField main = outer(x, radial(v, 2, 0));
    const TensorField corr = curl_rows(cross_right(outer(x, radial(v, 2, 1)), x));
    return sym(main + rat(sigma3) * corr);
}

TensorField p1_2d(const TensorField& v) {
    require_sym_matrix(v, 2, "P1_2D");
    const TensorField xp = perp(TensorField::position(2));
    return dot(xp, matvec(radial(v, 0, 1), xp));
}

TensorField p2_2d_signed(const TensorField& u, int sigma) {
    require_vector(u, 2, "P2_2D");
    require_sign(sigma);
    const TensorField x = TensorField::position(2);
    const TensorField main = outer(radial(u, 1, 0), x);
    // t(t-1) = -t(1-t)
    const TensorField s = dot(perp(x), radial(u, 1, 1));
    const TensorField corr = scurl_rows(-(s.value() * x));
    return sym(main + rat(sigma) * corr);
}

TensorField p1_2d(const TensorField& v, const BasePoint& x0) {
    return conjugate(v, x0, [](const TensorField& f) { return p1_2d(f); });
}

TensorField p1(const TensorField& e, const BasePoint& x0) {
    const int s = need(resolved_signs().p1, kSlotP1);
    return conjugate(e, x0, [s](const TensorField& f) { return p1_signed(f, s); });
}
TensorField p1(const TensorField& e) { return p1(e, BasePoint::origin(3)); }

TensorField p2(const TensorField& v, const BasePoint& x0) {
    const int s = need(resolved_signs().p2, kSlotP2);
    return conjugate(v, x0, [s](const TensorField& f) { return p2_signed(f, s); });
}
TensorField p2(const TensorField& v) { return p2(v, BasePoint::origin(3)); }

TensorField p3(const TensorField& v, const BasePoint& x0) {
    const int s = need(resolved_signs().p3, kSlotP3);
    return conjugate(v, x0, [s](const TensorField& f) { return p3_signed(f, s); });
}
TensorField p3(const TensorField& v) { return p3(v, BasePoint::origin(3)); }

TensorField p2_2d(const TensorField& u, const BasePoint& x0) {
    const int s = need(resolved_signs().p2_2d, kSlotP2_2D);
    return conjugate(u, x0, [s](const TensorField& f) { return p2_2d_signed(f, s); });
}
TensorField p2_2d(const TensorField& u) { return p2_2d(u, BasePoint::origin(2)); }

// Koszul family --------------------------------------------------------------------

TensorField koszul_r_signed(int which, int r, const TensorField& f, int sigma) {
    if (r < 0) throw PreconditionError("degree r must be non-negative");
    require_sign(sigma);
    if (!f.is_homogeneous(r)) throw PreconditionError("input is not homogeneous of degree " + std::to_string(r));
    const TensorField x = TensorField::position(3);
    const Rat s(sigma);
    switch (which) {
        case 1: {
            require_sym_matrix(f, 3, "K1");
            const Rat c1(1, r + 1), c2(1, (r + 1) * (r + 2));
            return c1 * matvec(f, x) + (s * c2) * matvec(cross_left(x, curl_cols(f)), x);
        }
        case 2: {
            require_sym_matrix(f, 3, "K2");
            const Rat c(1, (r + 2) * (r + 3));
            return ((s * c) * cross_right(cross_left(x, f), x)).with_symmetry(Symmetry::symmetric);
        }
        case 3: {
            require_vector(f, 3, "K3");
            const Rat c1(1, r + 3), c2(1, (r + 3) * (r + 4));
            return sym(c1 * outer(x, f) + (s * c2) * curl_rows(cross_right(outer(x, f), x)));
        }
        default: throw PreconditionError("Koszul operator index must be 1, 2 or 3");
    }
}

TensorField koszul_r(int which, int r, const TensorField& f) {
    const Signs& s = resolved_signs();
    switch (which) {
        case 1: return koszul_r_signed(1, r, f, need(s.p1, kSlotP1));
        case 2: return koszul_r_signed(2, r, f, need(s.p2, kSlotP2));
        case 3: return koszul_r_signed(3, r, f, need(s.p3, kSlotP3));
        default: throw PreconditionError("Koszul operator index must be 1, 2 or 3");
    }
}

// Rendering -------------------------------------------------------------------------

std::string closed_form_text(OperatorId id, std::optional<int> sigma) {
    auto join = [&](const std::string& slot) {
        if (!sigma) return " + " + slot + "·";
        return std::string(*sigma > 0 ? " + " : " - ");
    };
    auto lead = [&](const std::string& slot) {
        if (!sigma) return slot + "·";
        return std::string(*sigma > 0 ? "" : "-");
    };
    switch (id) {
        case OperatorId::P1: return "∫₀¹ E_tx·x dt" + join("σ₁") + "∫₀¹ (1-t) x∧(∇×E)_tx·x dt";
        case OperatorId::P2: return lead("σ₂") + "x∧(∫₀¹ t(1-t) V_tx dt)∧x";
        case OperatorId::P3: return "sym(∫₀¹ t² x⊗v_tx dt" + join("σ₃") + "(∫₀¹ t²(1-t) x⊗v_tx∧x dt)×∇)";
        case OperatorId::P1_2D: return "∫₀¹ (1-t) x⊥·V_tx·x⊥ dt";
        case OperatorId::P2_2D: return "sym(∫₀¹ t u_tx⊗x dt" + join("σ₂'") + "(∫₀¹ t(t-1)(x⊥·u_tx) x dt)×∇)";
        case OperatorId::K1: return "1/(r+1) E·x" + join("σ₁") + "1/((r+1)(r+2)) x∧(∇×E)·x";
        case OperatorId::K2: return lead("σ₂") + "1/((r+2)(r+3)) x∧V∧x";
        case OperatorId::K3: return "1/(r+3) sym(x⊗v)" + join("σ₃") + "1/((r+3)(r+4)) sym((x⊗v∧x)×∇)";
    }
    return {};
}

// Sign resolution ----------------------------------------------------------------------

std::vector<SlottedOperator> printed_operators(int dim, int probe_degree) {
    auto to_values = [](std::vector<TensorField> fs) {
        std::vector<Value> out;
        out.reserve(fs.size());
        for (auto& f : fs) out.emplace_back(std::move(f));
        return out;
    };
    auto field = [](const Value& v) -> const TensorField& { return std::get<TensorField>(v); };
    std::vector<SlottedOperator> ops;
    if (dim == 3) {
        const auto sym_probes = to_values(monomial_fields(3, Shape::matrix, Symmetry::symmetric, probe_degree));
        const auto vec_probes = to_values(monomial_fields(3, Shape::vector, Symmetry::none, probe_degree));
        ops.push_back({"P1", {kSlotP1}, [field](const Value& v, const std::vector<int>& s) -> Value { return p1_signed(field(v), s[0]); }, sym_probes});
        ops.push_back({"P2", {kSlotP2}, [field](const Value& v, const std::vector<int>& s) -> Value { return p2_signed(field(v), s[0]); }, sym_probes});
        ops.push_back({"P3", {kSlotP3}, [field](const Value& v, const std::vector<int>& s) -> Value { return p3_signed(field(v), s[0]); }, vec_probes});
    } else if (dim == 2) {
        ops.push_back({"P1_2D", {}, [field](const Value& v, const std::vector<int>&) -> Value { return p1_2d(field(v)); },
                       to_values(monomial_fields(2, Shape::matrix, Symmetry::symmetric, probe_degree))});
        ops.push_back({"P2_2D", {kSlotP2_2D}, [field](const Value& v, const std::vector<int>& s) -> Value { return p2_2d_signed(field(v), s[0]); },
                       to_values(monomial_fields(2, Shape::vector, Symmetry::none, probe_degree))});
    } else {
        throw ShapeError("dimension must be 2 or 3");
    }
    return ops;
}

SignReport resolve_printed_signs(int dim, int probe_degree) {
    return resolve_signs(dim, probe_degree, derived(dim).operators, printed_operators(dim, probe_degree));
}

const SignReport& sign_report(int dim) {
    static std::array<std::once_flag, 2> once;
    static std::array<SignReport, 2> cache;
    if (dim != 2 && dim != 3) throw ShapeError("dimension must be 2 or 3");
    std::call_once(once[std::size_t(dim - 2)], [&] { cache[std::size_t(dim - 2)] = resolve_printed_signs(dim, kSignProbeDegree); });
    return cache[std::size_t(dim - 2)];
}

Signs Signs::from_reports(const SignReport& r3, const SignReport& r2) {
    Signs s;
    s.p1 = r3.sign(kSlotP1);
    s.p2 = r3.sign(kSlotP2);
    s.p3 = r3.sign(kSlotP3);
    s.p2_2d = r2.sign(kSlotP2_2D);
    return s;
}

const Signs& resolved_signs() {
    static std::once_flag once;
    static Signs s;
    std::call_once(once, [] { s = Signs::from_reports(sign_report(3), sign_report(2)); });
    return s;
}

// Rigid motions --------------------------------------------------------------------------

std::vector<Rat> evaluate_at(const TensorField& f, std::span<const Rat> x) {
    std::vector<Rat> out;
    out.reserve(f.size());
    for (const auto& p : f.entries()) out.push_back(p.evaluate(x));
    return out;
}

namespace {

TensorField constant_vector(int dim, const std::vector<Rat>& v) {
    std::vector<Poly> c;
    for (const auto& a : v) c.push_back(Poly::constant(dim, a));
    return TensorField::vector(std::move(c));
}

TensorField shifted_position(const BasePoint& x0) {
    const int dim = int(x0.coords.size());
    return TensorField::position(dim) - constant_vector(dim, x0.coords);
}

}  // namespace

TensorField RigidMotion::field() const {
    const TensorField y = shifted_position(x0);
    if (a.dim() == 3) return a + cross(b, y);
    return a + b.value() * matvec(TensorField::chi(), y);
}

RigidMotion rigid_motion_extract(const TensorField& u, const BasePoint& x0) {
    require_vector(u, u.dim(), "rigid_motion_extract");
    if (!def_op(u).is_zero()) throw PreconditionError("field is not a rigid motion: def u ≠ 0");
    return RigidMotion{constant_vector(u.dim(), evaluate_at(u, x0.coords)),
                       [&] {
                           const auto w = evaluate_at(skw_vec(skw(grad(u))), x0.coords);
                           if (u.dim() == 3) return constant_vector(3, w);
                           return TensorField::scalar(Poly::constant(2, w[0]));
                       }(),
                       x0};
}

RigidMotion rigid_motion_extract(const TensorField& u) { return rigid_motion_extract(u, BasePoint::origin(u.dim())); }

TensorField rm_normalize(const TensorField& u, const BasePoint& x0) {
    require_vector(u, u.dim(), "rm_normalize");
    const auto w = evaluate_at(skw_vec(skw(grad(u))), x0.coords);
    RigidMotion rm{constant_vector(u.dim(), evaluate_at(u, x0.coords)),
                   u.dim() == 3 ? constant_vector(3, w) : TensorField::scalar(Poly::constant(2, w[0])), x0};
    return u - rm.field();
}

TensorField rm_normalize(const TensorField& u) { return rm_normalize(u, BasePoint::origin(u.dim())); }

// Potentials -------------------------------------------------------------------------------

TensorField incompatibility(const TensorField& e) {
    if (e.dim() == 3) return inc_op(e);
    require_sym_matrix(e, 2, "incompatibility");
    const auto dd = [&](int i, int j, int a, int b) { return e(i, j).derivative(a).derivative(b); };
    return TensorField::scalar(dd(0, 0, 1, 1) - Rat(2) * dd(0, 1, 0, 1) + dd(1, 1, 0, 0));
}

TensorField recover_displacement(const TensorField& e) {
    require_sym_matrix(e, 3, "recover_displacement");
    if (!inc_op(e).is_zero()) throw PreconditionError("strain is incompatible: inc E ≠ 0");
    return p1(e);
}

TensorField recover_inc_potential(const TensorField& v) {
    require_sym_matrix(v, 3, "recover_inc_potential");
    if (!div_rows(v).is_zero()) throw PreconditionError("field is not divergence-free");
    return p2(v);
}

TensorField recover_airy_potential(const TensorField& v) {
    require_sym_matrix(v, 2, "recover_airy_potential");
    if (!div_rows(v).is_zero()) throw PreconditionError("field is not divergence-free");
    return p1_2d(v);
}

}  // namespace kroner
