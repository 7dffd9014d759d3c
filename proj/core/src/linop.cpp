#include "kroner/linop.hpp"

#include "kroner/errors.hpp"

#include <optional>

namespace kroner {

// Value algebra -----------------------------------------------------------

namespace {

template <class T>
const T& same_alt(const Value& b, const T&) {
    if (!std::holds_alternative<T>(b)) throw ShapeError("operands hold different value kinds");
    return std::get<T>(b);
}

WPairField pair_add(const WPairField& a, const WPairField& b, const Rat& sb) {
    return WPairField((a.skew + sb * b.skew).with_symmetry(Symmetry::skew), a.vec + sb * b.vec);
}

}  // namespace

Value operator+(const Value& a, const Value& b) {
    return std::visit(
        [&](const auto& x) -> Value {
            using T = std::decay_t<decltype(x)>;
            const T& y = same_alt(b, x);
            if constexpr (std::is_same_v<T, WPairField>) return pair_add(x, y, Rat(1));
            else return x + y;
        },
        a);
}

Value operator-(const Value& a, const Value& b) {
    return std::visit(
        [&](const auto& x) -> Value {
            using T = std::decay_t<decltype(x)>;
            const T& y = same_alt(b, x);
            if constexpr (std::is_same_v<T, WPairField>) return pair_add(x, y, Rat(-1));
            else return x - y;
        },
        a);
}

Value operator*(const Rat& c, const Value& a) {
    return std::visit(
        [&](const auto& x) -> Value {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, WPairField>) return WPairField(c * x.skew, c * x.vec);
            else return c * x;
        },
        a);
}

bool value_is_zero(const Value& v) {
    return std::visit(
        [](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, WPairField>) return x.skew.is_zero() && x.vec.is_zero();
            else return x.is_zero();
        },
        v);
}

bool value_equal(const Value& a, const Value& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            return x == std::get<T>(b);
        },
        a);
}

std::string value_to_string(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, WPairField>) return "(" + x.skew.to_string() + " ; " + x.vec.to_string() + ")";
            else return x.to_string();
        },
        v);
}

// Space -------------------------------------------------------------------

Space Space::form(int dim, int k, ValueSpace vs) {
    Space s;
    s.kind = SpaceKind::form;
    s.dim = dim;
    s.k = k;
    s.vs = vs;
    return s;
}

Space Space::wform(int dim, int k) {
    Space s;
    s.kind = SpaceKind::wform;
    s.dim = dim;
    s.k = k;
    return s;
}

Space Space::field(int dim, Shape shape, Symmetry sym) {
    Space s;
    s.kind = SpaceKind::field;
    s.dim = dim;
    s.shape = shape;
    s.sym = sym;
    return s;
}

Space Space::wpair(int dim) {
    Space s;
    s.kind = SpaceKind::wpair;
    s.dim = dim;
    return s;
}

Space Space::subspace(std::string name, std::function<bool(const Value&)> pred) const {
    Space s = *this;
    s.constraint = std::move(name);
    s.member = std::make_shared<const std::function<bool(const Value&)>>(std::move(pred));
    return s;
}

std::string Space::label() const {
    if (!constraint.empty()) return constraint;
    auto vs_name = [](ValueSpace v) {
        switch (v) {
            case ValueSpace::scalar: return "R";
            case ValueSpace::vector: return "V";
            case ValueSpace::skew: return "K";
        }
        return "?";
    };
    switch (kind) {
        case SpaceKind::form: return "Λ" + std::to_string(k) + "(" + vs_name(vs) + ")";
        case SpaceKind::wform: return "Λ" + std::to_string(k) + "(W)";
        case SpaceKind::wpair: return "C(K×V)";
        case SpaceKind::field:
            switch (shape) {
                case Shape::scalar: return "C(R)";
                case Shape::vector: return "C(V)";
                case Shape::matrix:
                    return sym == Symmetry::symmetric ? "C(S)" : sym == Symmetry::skew ? "C(K)" : "C(M)";
            }
    }
    return "?";
}

Value Space::zero() const {
    switch (kind) {
        case SpaceKind::form: return Form(dim, k, vs);
        case SpaceKind::wform: return WForm::zero(dim, k);
        case SpaceKind::wpair:
            return WPairField(TensorField::zero(dim, Shape::matrix, Symmetry::skew), TensorField::zero(dim, Shape::vector));
        case SpaceKind::field: return TensorField::zero(dim, shape, sym);
    }
    throw ShapeError("unknown space");
}

bool Space::contains(const Value& v) const {
    bool ok = false;
    switch (kind) {
        case SpaceKind::form:
            if (auto f = std::get_if<Form>(&v)) ok = f->dim() == dim && f->degree() == k && f->value_space() == vs;
            break;
        case SpaceKind::wform:
            if (auto f = std::get_if<WForm>(&v)) ok = f->dim() == dim && f->degree() == k;
            break;
        case SpaceKind::wpair:
            if (auto f = std::get_if<WPairField>(&v)) ok = f->vec.dim() == dim;
            break;
        case SpaceKind::field:
            if (auto f = std::get_if<TensorField>(&v)) ok = f->dim() == dim && f->shape() == shape && f->satisfies(sym);
            break;
    }
    if (ok && member) ok = (*member)(v);
    return ok;
}

bool Space::operator==(const Space& o) const {
    if (kind != o.kind || dim != o.dim || constraint != o.constraint) return false;
    switch (kind) {
        case SpaceKind::form: return k == o.k && vs == o.vs;
        case SpaceKind::wform: return k == o.k;
        case SpaceKind::wpair: return true;
        case SpaceKind::field: return shape == o.shape && sym == o.sym;
    }
    return false;
}

namespace {

/// Whether values of `produced` may be fed to an operator expecting `expected`.
bool feeds(const Space& produced, const Space& expected) {
    if (produced == expected) return true;
    Space a = produced, b = expected;
    if (!b.constraint.empty()) return false;
    a.constraint.clear();
    if (a.kind == SpaceKind::field && b.kind == SpaceKind::field && b.sym == Symmetry::none) a.sym = Symmetry::none;
    return a == b;
}

}  // namespace

// LinOpExpr ---------------------------------------------------------------

struct LinOpExpr::Node {
    Kind kind = Kind::primitive;
    std::string symbol;
    std::string formula;
    Space in, out;
    Fn fn;
    Rat factor{1};
    std::vector<LinOpExpr> children;
};

LinOpExpr LinOpExpr::primitive(std::string symbol, Space in, Space out, Fn fn, std::string formula) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::primitive;
    n->symbol = std::move(symbol);
    n->formula = std::move(formula);
    n->in = std::move(in);
    n->out = std::move(out);
    n->fn = std::move(fn);
    return LinOpExpr(std::move(n));
}

LinOpExpr LinOpExpr::identity(Space s) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::identity;
    n->symbol = "id";
    n->in = s;
    n->out = std::move(s);
    return LinOpExpr(std::move(n));
}

LinOpExpr LinOpExpr::zero(Space in, Space out) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::zero;
    n->symbol = "0";
    n->in = std::move(in);
    n->out = std::move(out);
    return LinOpExpr(std::move(n));
}

LinOpExpr LinOpExpr::block(LinOpExpr a, LinOpExpr b, LinOpExpr c, LinOpExpr d, Space in, Space out) {
    if (in.kind != SpaceKind::wform || out.kind != SpaceKind::wform)
        throw ShapeError("block operators act on W-valued forms");
    const Space ks_in = Space::form(in.dim, in.k, ValueSpace::skew), vs_in = Space::form(in.dim, in.k, ValueSpace::vector);
    const Space ks_out = Space::form(out.dim, out.k, ValueSpace::skew), vs_out = Space::form(out.dim, out.k, ValueSpace::vector);
    auto check = [](const LinOpExpr& e, const Space& i, const Space& o, const char* where) {
        if (!(e.in() == i) || !(e.out() == o))
            throw ShapeError(std::string("block entry ") + where + " has signature " + e.in().label() + " → " +
                             e.out().label() + ", expected " + i.label() + " → " + o.label());
    };
    check(a, ks_in, ks_out, "(1,1)");
    check(b, vs_in, ks_out, "(1,2)");
    check(c, ks_in, vs_out, "(2,1)");
    check(d, vs_in, vs_out, "(2,2)");
    auto n = std::make_shared<Node>();
    n->kind = Kind::block;
    n->symbol = "block";
    n->in = std::move(in);
    n->out = std::move(out);
    n->children = {std::move(a), std::move(b), std::move(c), std::move(d)};
    return LinOpExpr(std::move(n));
}

LinOpExpr::Kind LinOpExpr::kind() const { return n_->kind; }
const Space& LinOpExpr::in() const { return n_->in; }
const Space& LinOpExpr::out() const { return n_->out; }
const std::string& LinOpExpr::symbol() const { return n_->symbol; }
const std::vector<LinOpExpr>& LinOpExpr::children() const { return n_->children; }

LinOpExpr compose(const LinOpExpr& outer, const LinOpExpr& inner) {
    if (!feeds(inner.out(), outer.in()))
        throw ShapeError("cannot compose " + outer.render() + " : " + outer.in().label() + " → " + outer.out().label() +
                         " after " + inner.render() + " : " + inner.in().label() + " → " + inner.out().label());
    auto n = std::make_shared<LinOpExpr::Node>();
    n->kind = LinOpExpr::Kind::compose;
    n->symbol = "∘";
    n->in = inner.in();
    n->out = outer.out();
    n->children = {outer, inner};
    return LinOpExpr(std::move(n));
}

LinOpExpr compose_chain(const std::vector<LinOpExpr>& ops) {
    if (ops.empty()) throw ShapeError("empty composition chain");
    LinOpExpr r = ops.back();
    for (auto it = ops.rbegin() + 1; it != ops.rend(); ++it) r = compose(*it, r);
    return r;
}

LinOpExpr operator+(const LinOpExpr& a, const LinOpExpr& b) {
    if (!(a.in() == b.in()) || !feeds(b.out(), a.out()))
        throw ShapeError("cannot add operators with signatures " + a.in().label() + " → " + a.out().label() + " and " +
                         b.in().label() + " → " + b.out().label());
    auto n = std::make_shared<LinOpExpr::Node>();
    n->kind = LinOpExpr::Kind::add;
    n->symbol = "+";
    n->in = a.in();
    n->out = a.out();
    n->children = {a, b};
    return LinOpExpr(std::move(n));
}

LinOpExpr LinOpExpr::operator-() const {
    auto n = std::make_shared<Node>();
    n->kind = Kind::negate;
    n->symbol = "-";
    n->in = in();
    n->out = out();
    n->children = {*this};
    return LinOpExpr(std::move(n));
}

LinOpExpr operator-(const LinOpExpr& a, const LinOpExpr& b) { return a + (-b); }

LinOpExpr operator*(const Rat& c, const LinOpExpr& a) {
    auto n = std::make_shared<LinOpExpr::Node>();
    n->kind = LinOpExpr::Kind::scale;
    n->symbol = c.get_str();
    n->factor = c;
    n->in = a.in();
    n->out = a.out();
    n->children = {a};
    return LinOpExpr(std::move(n));
}

Value LinOpExpr::operator()(const Value& v) const {
    const Node& n = *n_;
    if (!n.in.contains(v))
        throw ShapeError("operand of " + render() + " is not in " + n.in.label() + ": " + value_to_string(v));
    switch (n.kind) {
        case Kind::primitive: return n.fn(v);
        case Kind::identity: return v;
        case Kind::zero: return n.out.zero();
        case Kind::compose: return n.children[0](n.children[1](v));
        case Kind::add: return n.children[0](v) + n.children[1](v);
        case Kind::negate: return Rat(-1) * n.children[0](v);
        case Kind::scale: return n.factor * n.children[0](v);
        case Kind::block: {
            const auto& w = std::get<WForm>(v);
            auto part = [&](std::size_t i, const Form& x) -> std::optional<Form> {
                if (n.children[i].kind() == Kind::zero) return std::nullopt;
                return std::get<Form>(n.children[i](Value(x)));
            };
            auto sum = [](std::optional<Form> a, std::optional<Form> b, Form zero) {
                if (a && b) return *a + *b;
                if (a) return *a;
                if (b) return *b;
                return zero;
            };
            Form s = sum(part(0, w.skew), part(1, w.vec), Form(n.out.dim, n.out.k, ValueSpace::skew));
            Form t = sum(part(2, w.skew), part(3, w.vec), Form(n.out.dim, n.out.k, ValueSpace::vector));
            return WForm(std::move(s), std::move(t));
        }
    }
    throw ShapeError("unknown operator node");
}

namespace {

constexpr int kPrecAdd = 1, kPrecCompose = 2, kPrecUnary = 3, kPrecAtom = 4;

}  // namespace

std::string LinOpExpr::render_impl(bool formula, int parent_prec) const {
    const Node& n = *n_;
    std::string s;
    int prec = kPrecAtom;
    switch (n.kind) {
        case Kind::primitive: s = formula && !n.formula.empty() ? n.formula : n.symbol; break;
        case Kind::identity:
        case Kind::zero: s = n.symbol; break;
        case Kind::compose:
            prec = kPrecCompose;
            s = n.children[0].render_impl(formula, kPrecCompose) + " ∘ " + n.children[1].render_impl(formula, kPrecCompose);
            break;
        case Kind::add: {
            prec = kPrecAdd;
            const auto& rhs = n.children[1];
            s = n.children[0].render_impl(formula, kPrecAdd);
            if (rhs.kind() == Kind::negate)
                s += " - " + rhs.children()[0].render_impl(formula, kPrecAdd + 1);
            else
                s += " + " + rhs.render_impl(formula, kPrecAdd + 1);
            break;
        }
        case Kind::negate:
            prec = kPrecUnary;
            s = "-" + n.children[0].render_impl(formula, kPrecUnary);
            break;
        case Kind::scale:
            prec = kPrecUnary;
            s = n.factor.get_str() + "·" + n.children[0].render_impl(formula, kPrecUnary + 1);
            break;
        case Kind::block:
            s = "[[" + n.children[0].render_impl(formula, 0) + ", " + n.children[1].render_impl(formula, 0) + "], [" +
                n.children[2].render_impl(formula, 0) + ", " + n.children[3].render_impl(formula, 0) + "]]";
            break;
    }
    if (prec < parent_prec) return "(" + s + ")";
    return s;
}

std::string LinOpExpr::render() const { return render_impl(false, 0); }
std::string LinOpExpr::render_formula() const { return render_impl(true, 0); }

nlohmann::json LinOpExpr::to_json() const {
    static const char* names[] = {"primitive", "identity", "zero", "compose", "add", "negate", "scale", "block"};
    const Node& n = *n_;
    nlohmann::json j;
    j["op"] = names[int(n.kind)];
    if (n.kind == Kind::primitive) {
        j["symbol"] = n.symbol;
        if (!n.formula.empty()) j["formula"] = n.formula;
    }
    if (n.kind == Kind::scale) j["factor"] = n.factor.get_str();
    j["in"] = n.in.label();
    j["out"] = n.out.label();
    if (!n.children.empty()) {
        j["children"] = nlohmann::json::array();
        for (const auto& c : n.children) j["children"].push_back(c.to_json());
    }
    return j;
}

LinOpExpr LinOpExpr::simplified() const {
    const Node& n = *n_;
    switch (n.kind) {
        case Kind::compose: {
            LinOpExpr a = n.children[0].simplified(), b = n.children[1].simplified();
            if (a.kind() == Kind::identity) return b;
            if (b.kind() == Kind::identity) return a;
            if (a.kind() == Kind::zero || b.kind() == Kind::zero) return zero(b.in(), a.out());
            // Keep compositions right-nested: (A ∘ B) ∘ C → A ∘ (B ∘ C).
            if (a.kind() == Kind::compose) return compose(a.children()[0], compose(a.children()[1], b).simplified());
            if (a.kind() == Kind::negate) return -compose(a.children()[0], b).simplified();
            if (b.kind() == Kind::negate) return -compose(a, b.children()[0]).simplified();
            return compose(a, b);
        }
        case Kind::add: {
            LinOpExpr a = n.children[0].simplified(), b = n.children[1].simplified();
            if (b.kind() == Kind::zero) return a;
            if (a.kind() == Kind::zero) return b;
            return a + b;
        }
        case Kind::negate: {
            LinOpExpr a = n.children[0].simplified();
            if (a.kind() == Kind::negate) return a.children()[0];
            if (a.kind() == Kind::zero) return a;
            return -a;
        }
        case Kind::scale: {
            LinOpExpr a = n.children[0].simplified();
            if (n.factor == 1) return a;
            if (n.factor == -1) return (-a).simplified();
            return n.factor * a;
        }
        case Kind::block:
            return block(n.children[0].simplified(), n.children[1].simplified(), n.children[2].simplified(),
                         n.children[3].simplified(), n.in, n.out);
        default: return *this;
    }
}

}  // namespace kroner
