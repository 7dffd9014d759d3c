#include "kroner/forms.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <sstream>

#include "kroner/errors.hpp"

namespace kroner {

std::string to_string(ValueSpace v) {
    switch (v) {
        case ValueSpace::scalar: return "scalar";
        case ValueSpace::vector: return "vector";
        case ValueSpace::skew: return "skew";
    }
    return "?";
}

int value_components(int dim, ValueSpace v) {
    switch (v) {
        case ValueSpace::scalar: return 1;
        case ValueSpace::vector: return dim;
        case ValueSpace::skew: return dim == 3 ? 3 : 1;
    }
    return 0;
}

namespace {

std::vector<MultiIndex> make_basis(int dim, int k) {
    std::vector<MultiIndex> out;
    MultiIndex cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (int(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < dim; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

void check_dim_k(int dim, int k) {
    if (dim != 2 && dim != 3) throw ShapeError("form dimension must be 2 or 3");
    if (k < 0 || k > dim) throw ShapeError("form degree out of range");
}

}  // namespace

const std::vector<MultiIndex>& form_basis(int dim, int k) {
    check_dim_k(dim, k);
    static const std::array<std::array<std::vector<MultiIndex>, 4>, 2> table = [] {
        std::array<std::array<std::vector<MultiIndex>, 4>, 2> t;
        for (int d = 2; d <= 3; ++d)
            for (int k = 0; k <= d; ++k) t[std::size_t(d - 2)][std::size_t(k)] = make_basis(d, k);
        return t;
    }();
    return table[std::size_t(dim - 2)][std::size_t(k)];
}

int basis_position(int dim, const MultiIndex& sigma) {
    const auto& b = form_basis(dim, int(sigma.size()));
    auto it = std::find(b.begin(), b.end(), sigma);
    if (it == b.end()) throw ShapeError("index tuple is not strictly increasing");
    return int(it - b.begin());
}

Form::Form(int dim, int k, ValueSpace vs) : dim_(dim), k_(k), vs_(vs) {
    check_dim_k(dim, k);
    c_.assign(form_basis(dim, k).size(), std::vector<Poly>(std::size_t(value_components(dim, vs)), Poly(dim)));
}

Form Form::scalar0(const Poly& f) {
    Form w(f.dim(), 0, ValueSpace::scalar);
    w.c_[0][0] = f;
    return w;
}

const Poly& Form::coeff(const MultiIndex& sigma, int comp) const {
    if (int(sigma.size()) != k_) throw ShapeError("index tuple length differs from form degree");
    return c_[std::size_t(basis_position(dim_, sigma))].at(std::size_t(comp));
}

void Form::set(const MultiIndex& sigma, int comp, Poly p) {
    if (int(sigma.size()) != k_) throw ShapeError("index tuple length differs from form degree");
    if (p.dim() != dim_) throw ShapeError("coefficient dimension differs from form");
    c_[std::size_t(basis_position(dim_, sigma))].at(std::size_t(comp)) = std::move(p);
}

bool Form::is_zero() const {
    for (const auto& v : c_)
        for (const auto& p : v)
            if (!p.is_zero()) return false;
    return true;
}

int Form::poly_degree() const {
    int d = -1;
    for (const auto& v : c_)
        for (const auto& p : v) d = std::max(d, p.degree());
    return d;
}

bool Form::is_homogeneous(int r) const {
    for (const auto& v : c_)
        for (const auto& p : v)
            if (!p.is_homogeneous(r)) return false;
    return true;
}

bool Form::same_kind(const Form& o) const { return dim_ == o.dim_ && k_ == o.k_ && vs_ == o.vs_; }

void Form::check_same(const Form& o) const {
    if (!same_kind(o)) throw ShapeError("form kind mismatch");
}

Form& Form::operator+=(const Form& o) {
    check_same(o);
    for (std::size_t s = 0; s < c_.size(); ++s)
        for (std::size_t i = 0; i < c_[s].size(); ++i) c_[s][i] += o.c_[s][i];
    return *this;
}

Form& Form::operator-=(const Form& o) {
    check_same(o);
    for (std::size_t s = 0; s < c_.size(); ++s)
        for (std::size_t i = 0; i < c_[s].size(); ++i) c_[s][i] -= o.c_[s][i];
    return *this;
}

Form operator*(const Rat& c, Form a) {
    for (auto& v : a.c_)
        for (auto& p : v) p *= c;
    return a;
}

Form Form::operator-() const { return Rat(-1) * *this; }

bool Form::operator==(const Form& o) const { return same_kind(o) && c_ == o.c_; }

Form Form::map_coeffs(const std::function<Poly(const Poly&)>& f) const {
    Form r = *this;
    for (auto& v : r.c_)
        for (auto& p : v) p = f(p);
    return r;
}

Form Form::translate(std::span<const Rat> c) const {
    return map_coeffs([&](const Poly& p) { return p.translate(c); });
}

std::string Form::to_string() const {
    std::ostringstream os;
    const auto& basis = form_basis(dim_, k_);
    bool first = true;
    for (std::size_t s = 0; s < c_.size(); ++s) {
        bool nz = false;
        for (const auto& p : c_[s]) nz = nz || !p.is_zero();
        if (!nz) continue;
        if (!first) os << " + ";
        first = false;
        if (c_[s].size() == 1) {
            os << "(" << c_[s][0].to_string() << ")";
        } else {
            os << "(";
            for (std::size_t i = 0; i < c_[s].size(); ++i) os << (i ? ", " : "") << c_[s][i].to_string();
            os << ")";
        }
        for (std::size_t j = 0; j < basis[s].size(); ++j) os << (j ? "^" : " ") << "dx" << (basis[s][j] + 1);
    }
    return first ? "0" : os.str();
}

bool BasePoint::is_origin() const {
    return std::all_of(coords.begin(), coords.end(), [](const Rat& r) { return r == 0; });
}

Form ext_d(const Form& w) {
    const int n = w.dim(), k = w.degree();
    if (k >= n) throw PreconditionError("exterior derivative of a top-degree form");
    Form out(n, k + 1, w.value_space());
    const auto& basis = form_basis(n, k);
    for (std::size_t s = 0; s < basis.size(); ++s) {
        const auto& sigma = basis[s];
        for (int i = 0; i < n; ++i) {
            if (std::find(sigma.begin(), sigma.end(), i) != sigma.end()) continue;
            const auto below = std::count_if(sigma.begin(), sigma.end(), [i](int j) { return j < i; });
            MultiIndex tau = sigma;
            tau.insert(tau.begin() + below, i);
            const std::size_t t = std::size_t(basis_position(n, tau));
            const Rat sign(below % 2 ? -1 : 1);
            for (int c = 0; c < w.components(); ++c) {
                const Poly& a = w.coeff(s, c);
                if (a.is_zero()) continue;
                out.coeff(t, c) += sign * a.derivative(i);
            }
        }
    }
    return out;
}

Form interior(const Form& w, const std::vector<Poly>& v) {
    const int n = w.dim(), k = w.degree();
    if (k == 0) throw PreconditionError("contraction of a 0-form");
    if (int(v.size()) != n) throw ShapeError("contraction vector has wrong length");
    Form out(n, k - 1, w.value_space());
    const auto& basis = form_basis(n, k);
    for (std::size_t s = 0; s < basis.size(); ++s) {
        const auto& sigma = basis[s];
        for (int j = 0; j < k; ++j) {
            MultiIndex tau = sigma;
            tau.erase(tau.begin() + j);
            const std::size_t t = std::size_t(basis_position(n, tau));
            const Poly factor = (j % 2 ? -v[std::size_t(sigma[std::size_t(j)])] : v[std::size_t(sigma[std::size_t(j)])]);
            for (int c = 0; c < w.components(); ++c) {
                const Poly& a = w.coeff(s, c);
                if (a.is_zero()) continue;
                out.coeff(t, c) += factor * a;
            }
        }
    }
    return out;
}

namespace {

std::vector<Poly> shifted_position(int dim, const BasePoint& x0) {
    std::vector<Poly> v;
    for (int i = 0; i < dim; ++i) {
        Poly p = Poly::variable(dim, i);
        if (std::size_t(i) < x0.coords.size()) p -= Poly::constant(dim, x0.coords[std::size_t(i)]);
        v.push_back(std::move(p));
    }
    return v;
}

void check_base(const Form& w, const BasePoint& x0) {
    if (!x0.coords.empty() && int(x0.coords.size()) != w.dim())
        throw ShapeError("base point dimension differs from form");
}

Form poincare_origin(const Form& w) {
    const unsigned a = unsigned(w.degree() - 1);
    Form r = w.map_coeffs([a](const Poly& p) { return radial_beta_transform(p, a, 0); });
    return interior(r, shifted_position(w.dim(), BasePoint{}));
}

}  // namespace

Form koszul(const Form& w, const BasePoint& x0) {
    check_base(w, x0);
    return interior(w, shifted_position(w.dim(), x0));
}

Form koszul(const Form& w) { return koszul(w, BasePoint{}); }

Form poincare(const Form& w, const BasePoint& x0) {
    if (w.degree() == 0) throw PreconditionError("Poincaré operator on a 0-form");
    check_base(w, x0);
    if (x0.coords.empty() || x0.is_origin()) return poincare_origin(w);
    std::vector<Rat> minus;
    for (const auto& c : x0.coords) minus.push_back(-c);
    return poincare_origin(w.translate(x0.coords)).translate(minus);
}

Form poincare(const Form& w) { return poincare(w, BasePoint{}); }

Form k_form(const Form& w) {
    if (w.value_space() != ValueSpace::vector) throw ShapeError("K acts on vector-valued forms");
    const int n = w.dim();
    Form out(n, w.degree(), ValueSpace::skew);
    std::vector<Poly> x;
    for (int i = 0; i < n; ++i) x.push_back(Poly::variable(n, i));
    for (std::size_t s = 0; s < w.basis_size(); ++s) {
        const auto& v = w.values(s);
        if (n == 3) {
            // x⊗v - v⊗x = Skw(v∧x)
            for (int i = 0; i < 3; ++i) {
                const int j = (i + 1) % 3, k = (i + 2) % 3;
                out.coeff(s, i) = v[std::size_t(j)] * x[std::size_t(k)] - v[std::size_t(k)] * x[std::size_t(j)];
            }
        } else {
            // x⊗v - v⊗x = (x₂v₁ - x₁v₂) χ
            out.coeff(s, 0) = x[1] * v[0] - x[0] * v[1];
        }
    }
    return out;
}

WForm::WForm(Form skew_part, Form vec_part) : skew(std::move(skew_part)), vec(std::move(vec_part)) {
    if (skew.value_space() != ValueSpace::skew || vec.value_space() != ValueSpace::vector)
        throw ShapeError("W-valued form needs a skew part and a vector part");
    if (skew.dim() != vec.dim() || skew.degree() != vec.degree())
        throw ShapeError("W-valued form parts differ in dimension or degree");
}

WForm WForm::zero(int dim, int k) { return WForm(Form(dim, k, ValueSpace::skew), Form(dim, k, ValueSpace::vector)); }

WForm& WForm::operator+=(const WForm& o) {
    skew += o.skew;
    vec += o.vec;
    return *this;
}

WForm& WForm::operator-=(const WForm& o) {
    skew -= o.skew;
    vec -= o.vec;
    return *this;
}

WForm operator*(const Rat& c, WForm a) {
    a.skew = c * a.skew;
    a.vec = c * a.vec;
    return a;
}

WForm WForm::operator-() const { return Rat(-1) * *this; }

std::string WForm::to_string() const { return "(" + skew.to_string() + " ; " + vec.to_string() + ")"; }

// Proxies -----------------------------------------------------------------

namespace {

TensorField values_as_vector(const std::vector<Poly>& v) { return TensorField::vector(v); }

}  // namespace

TensorField proxy(const Form& w) {
    const int n = w.dim(), k = w.degree();
    const int nc = w.components();
    if (nc == 1) {
        auto a = [&](std::size_t s) { return w.coeff(s, 0); };
        if (k == 0 || k == n) return TensorField::scalar(a(0));
        if (n == 2) return TensorField::vector({a(0), a(1)});
        if (k == 1) return TensorField::vector({a(0), a(1), a(2)});
        return TensorField::vector({a(2), -a(1), a(0)});
    }
    if (k == 0 || k == n) return values_as_vector(w.values(0));
    std::vector<Poly> e(std::size_t(n * n), Poly(n));
    auto at = [&](int i, int j) -> Poly& { return e[std::size_t(i * n + j)]; };
    if (n == 2) {
        for (int i = 0; i < 2; ++i) {
            at(i, 0) = w.coeff(1, i);
            at(i, 1) = -w.coeff(0, i);
        }
    } else if (k == 1) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) at(i, j) = w.coeff(std::size_t(j), i);
    } else {
        for (int i = 0; i < 3; ++i) {
            at(i, 0) = w.coeff(2, i);
            at(i, 1) = -w.coeff(1, i);
            at(i, 2) = w.coeff(0, i);
        }
    }
    return TensorField::matrix(n, std::move(e));
}

Form unproxy(const TensorField& f, int k, ValueSpace vs) {
    const int n = f.dim();
    Form w(n, k, vs);
    const int nc = w.components();
    auto need = [&](Shape s) {
        if (f.shape() != s)
            throw ShapeError("proxy of a " + to_string(vs) + " " + std::to_string(k) + "-form must be a " +
                             to_string(s) + " field");
    };
    if (nc == 1) {
        if (k == 0 || k == n) {
            need(Shape::scalar);
            w.coeff(0, 0) = f.value();
        } else if (n == 2 || k == 1) {
            need(Shape::vector);
            for (int i = 0; i < n; ++i) w.coeff(std::size_t(i), 0) = f[i];
        } else {
            need(Shape::vector);
            w.coeff(2, 0) = f[0];
            w.coeff(1, 0) = -f[1];
            w.coeff(0, 0) = f[2];
        }
        return w;
    }
    if (k == 0 || k == n) {
        need(Shape::vector);
        for (int i = 0; i < n; ++i) w.coeff(0, i) = f[i];
        return w;
    }
    need(Shape::matrix);
    if (n == 2) {
        for (int i = 0; i < 2; ++i) {
            w.coeff(1, i) = f(i, 0);
            w.coeff(0, i) = -f(i, 1);
        }
    } else if (k == 1) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) w.coeff(std::size_t(j), i) = f(i, j);
    } else {
        for (int i = 0; i < 3; ++i) {
            w.coeff(2, i) = f(i, 0);
            w.coeff(1, i) = -f(i, 1);
            w.coeff(0, i) = f(i, 2);
        }
    }
    return w;
}

WPairField j0_proxy(const WForm& w) {
    if (w.dim() != 3 || w.degree() != 0) throw ShapeError("J0 acts on 3D W-valued 0-forms");
    return WPairField(vec_skw(values_as_vector(w.vec.values(0))), values_as_vector(w.skew.values(0)));
}

WForm j0_unproxy(const WPairField& p) {
    if (p.vec.dim() != 3) throw ShapeError("J0 inverse expects a 3D pair");
    WForm w = WForm::zero(3, 0);
    const auto v = skw_vec(p.skew);
    for (int i = 0; i < 3; ++i) {
        w.skew.coeff(0, i) = p.vec[i];
        w.vec.coeff(0, i) = v[i];
    }
    return w;
}

WPairField jtop_proxy(const WForm& w) {
    const int n = w.dim();
    if (w.degree() != n) throw ShapeError("top-degree J acts on W-valued top forms");
    TensorField s = n == 3 ? vec_skw(values_as_vector(w.skew.values(0))) : vec_skw(TensorField::scalar(w.skew.coeff(0, 0)));
    return WPairField(std::move(s), values_as_vector(w.vec.values(0)));
}

WForm jtop_unproxy(const WPairField& p) {
    const int n = p.vec.dim();
    WForm w = WForm::zero(n, n);
    const auto s = skw_vec(p.skew);
    if (n == 3) {
        for (int i = 0; i < 3; ++i) w.skew.coeff(0, i) = s[i];
    } else {
        w.skew.coeff(0, 0) = s.value();
    }
    for (int i = 0; i < n; ++i) w.vec.coeff(0, i) = p.vec[i];
    return w;
}

}  // namespace kroner
