#include "kroner/tensor_field.hpp"

#include <sstream>

#include "kroner/errors.hpp"

namespace kroner {

std::string to_string(Shape s) {
    switch (s) {
        case Shape::scalar: return "scalar";
        case Shape::vector: return "vector";
        case Shape::matrix: return "matrix";
    }
    return "?";
}

std::string to_string(Symmetry s) {
    switch (s) {
        case Symmetry::none: return "none";
        case Symmetry::symmetric: return "symmetric";
        case Symmetry::skew: return "skew";
    }
    return "?";
}

int levi_civita(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    // even permutations of (0,1,2)
    if ((i == 0 && j == 1) || (i == 1 && j == 2) || (i == 2 && j == 0)) return 1;
    return -1;
}

namespace {

std::size_t entry_count(int dim, Shape shape) {
    switch (shape) {
        case Shape::scalar: return 1;
        case Shape::vector: return std::size_t(dim);
        case Shape::matrix: return std::size_t(dim * dim);
    }
    return 0;
}

void require(bool ok, const char* msg) {
    if (!ok) throw ShapeError(msg);
}

void require_dim3(const TensorField& a, const char* op) {
    if (a.dim() != 3) throw ShapeError(std::string(op) + " requires a 3D field");
}

}  // namespace

TensorField::TensorField(int dim, Shape shape, Symmetry sym, std::vector<Poly> entries)
    : dim_(dim), shape_(shape), symmetry_(sym), entries_(std::move(entries)) {
    require(dim == 2 || dim == 3, "field dimension must be 2 or 3");
    require(entries_.size() == entry_count(dim, shape), "entry count does not match shape");
    for (const auto& p : entries_) require(p.dim() == dim, "entry dimension does not match field");
    if (sym != Symmetry::none) {
        if (shape != Shape::matrix) throw SymmetryError("symmetry tags apply to matrices only");
        if (!satisfies(sym)) throw SymmetryError("matrix entries are not " + kroner::to_string(sym));
    }
}

TensorField TensorField::scalar(Poly p) {
    const int d = p.dim();
    return TensorField(d, Shape::scalar, Symmetry::none, {std::move(p)});
}

TensorField TensorField::vector(std::vector<Poly> comps) {
    require(!comps.empty(), "empty vector field");
    const int d = comps.front().dim();
    return TensorField(d, Shape::vector, Symmetry::none, std::move(comps));
}

TensorField TensorField::matrix(int dim, std::vector<Poly> row_major, Symmetry sym) {
    return TensorField(dim, Shape::matrix, sym, std::move(row_major));
}

TensorField TensorField::zero(int dim, Shape shape, Symmetry sym) {
    return TensorField(dim, shape, shape == Shape::matrix ? sym : Symmetry::none,
                       std::vector<Poly>(entry_count(dim, shape), Poly(dim)));
}

TensorField TensorField::position(int dim) {
    std::vector<Poly> c;
    for (int i = 0; i < dim; ++i) c.push_back(Poly::variable(dim, i));
    return vector(std::move(c));
}

TensorField TensorField::identity(int dim) {
    std::vector<Poly> e(std::size_t(dim * dim), Poly(dim));
    for (int i = 0; i < dim; ++i) e[std::size_t(i * dim + i)] = Poly::constant(dim, 1);
    return matrix(dim, std::move(e), Symmetry::symmetric);
}

TensorField TensorField::unit_vector(int dim, int i) {
    std::vector<Poly> c(std::size_t(dim), Poly{dim});
    c.at(std::size_t(i)) = Poly::constant(dim, 1);
    return vector(std::move(c));
}

TensorField TensorField::chi() {
    return matrix(2, {Poly(2), Poly::constant(2, -1), Poly::constant(2, 1), Poly(2)}, Symmetry::skew);
}

const Poly& TensorField::operator[](int i) const {
    require(shape_ == Shape::vector, "component access requires a vector field");
    return entries_.at(std::size_t(i));
}

const Poly& TensorField::operator()(int i, int j) const {
    require(shape_ == Shape::matrix, "entry access requires a matrix field");
    return entries_.at(std::size_t(i * dim_ + j));
}

const Poly& TensorField::value() const {
    require(shape_ == Shape::scalar, "value() requires a scalar field");
    return entries_.front();
}

bool TensorField::satisfies(Symmetry sym) const {
    if (sym == Symmetry::none) return true;
    if (shape_ != Shape::matrix) return false;
    for (int i = 0; i < dim_; ++i) {
        for (int j = i; j < dim_; ++j) {
            const Poly& a = (*this)(i, j);
            const Poly& b = (*this)(j, i);
            if (sym == Symmetry::symmetric && !(a == b)) return false;
            if (sym == Symmetry::skew && !(a == -b)) return false;
        }
    }
    return true;
}

TensorField TensorField::with_symmetry(Symmetry sym) const {
    return TensorField(dim_, shape_, sym, entries_);
}

bool TensorField::is_zero() const {
    for (const auto& p : entries_)
        if (!p.is_zero()) return false;
    return true;
}

int TensorField::degree() const {
    int d = -1;
    for (const auto& p : entries_) d = std::max(d, p.degree());
    return d;
}

bool TensorField::is_homogeneous(int r) const {
    for (const auto& p : entries_)
        if (!p.is_homogeneous(r)) return false;
    return true;
}

void TensorField::check_same(const TensorField& o) const {
    if (dim_ != o.dim_ || shape_ != o.shape_) throw ShapeError("field shape mismatch");
}

TensorField& TensorField::operator+=(const TensorField& o) {
    check_same(o);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    if (symmetry_ != o.symmetry_) symmetry_ = Symmetry::none;
    return *this;
}

TensorField& TensorField::operator-=(const TensorField& o) {
    check_same(o);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    if (symmetry_ != o.symmetry_) symmetry_ = Symmetry::none;
    return *this;
}

TensorField operator*(const Rat& c, const TensorField& a) {
    TensorField r = a;
    for (auto& p : r.entries_) p *= c;
    return r;
}

TensorField operator*(const Poly& p, const TensorField& a) {
    TensorField r = a;
    for (auto& e : r.entries_) e = p * e;
    return r;
}

TensorField TensorField::operator-() const { return Rat(-1) * *this; }

bool TensorField::operator==(const TensorField& o) const {
    return dim_ == o.dim_ && shape_ == o.shape_ && entries_ == o.entries_;
}

TensorField TensorField::map(const std::function<Poly(const Poly&)>& f) const {
    std::vector<Poly> e;
    e.reserve(entries_.size());
    for (const auto& p : entries_) e.push_back(f(p));
    TensorField r(dim_, shape_, Symmetry::none, std::move(e));
    if (symmetry_ != Symmetry::none && r.satisfies(symmetry_)) r.symmetry_ = symmetry_;
    return r;
}

std::string TensorField::to_string() const {
    std::ostringstream os;
    switch (shape_) {
        case Shape::scalar: os << entries_[0].to_string(); break;
        case Shape::vector:
            os << "(";
            for (int i = 0; i < dim_; ++i) os << (i ? ", " : "") << entries_[std::size_t(i)].to_string();
            os << ")";
            break;
        case Shape::matrix:
            os << "[";
            for (int i = 0; i < dim_; ++i) {
                os << (i ? ", [" : "[");
                for (int j = 0; j < dim_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
                os << "]";
            }
            os << "]";
            break;
    }
    return os.str();
}

WPairField::WPairField(TensorField skew_part, TensorField vec_part)
    : skew(std::move(skew_part)), vec(std::move(vec_part)) {
    if (skew.dim() != vec.dim()) throw ShapeError("W-pair parts must share a dimension");
    if (skew.shape() != Shape::matrix || !skew.satisfies(Symmetry::skew))
        throw SymmetryError("W-pair skew part must be a skew matrix");
    if (vec.shape() != Shape::vector) throw ShapeError("W-pair vector part must be a vector");
    skew = skew.with_symmetry(Symmetry::skew);
}

// Pointwise algebra -------------------------------------------------------

TensorField transpose(const TensorField& a) {
    require(a.shape() == Shape::matrix, "transpose requires a matrix");
    const int n = a.dim();
    std::vector<Poly> e;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) e.push_back(a(j, i));
    return TensorField::matrix(n, std::move(e), a.symmetry());
}

TensorField sym(const TensorField& a) {
    const Rat half(1, 2);
    auto s = half * (a + transpose(a));
    return s.with_symmetry(Symmetry::symmetric);
}

TensorField skw(const TensorField& a) {
    const Rat half(1, 2);
    auto s = half * (a - transpose(a));
    return s.with_symmetry(Symmetry::skew);
}

TensorField trace(const TensorField& a) {
    require(a.shape() == Shape::matrix, "trace requires a matrix");
    Poly t(a.dim());
    for (int i = 0; i < a.dim(); ++i) t += a(i, i);
    return TensorField::scalar(std::move(t));
}

TensorField frobenius(const TensorField& a, const TensorField& b) {
    require(a.shape() == Shape::matrix && b.shape() == Shape::matrix && a.dim() == b.dim(),
            "frobenius product requires matrices of equal dimension");
    Poly s(a.dim());
    for (std::size_t i = 0; i < a.size(); ++i) s += a.entries()[i] * b.entries()[i];
    return TensorField::scalar(std::move(s));
}

TensorField outer(const TensorField& u, const TensorField& v) {
    require(u.shape() == Shape::vector && v.shape() == Shape::vector && u.dim() == v.dim(),
            "outer product requires vectors of equal dimension");
    const int n = u.dim();
    std::vector<Poly> e;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) e.push_back(u[i] * v[j]);
    return TensorField::matrix(n, std::move(e));
}

TensorField dot(const TensorField& u, const TensorField& v) {
    require(u.shape() == Shape::vector && v.shape() == Shape::vector && u.dim() == v.dim(),
            "dot product requires vectors of equal dimension");
    Poly s(u.dim());
    for (int i = 0; i < u.dim(); ++i) s += u[i] * v[i];
    return TensorField::scalar(std::move(s));
}

TensorField matvec(const TensorField& m, const TensorField& u) {
    require(m.shape() == Shape::matrix && u.shape() == Shape::vector && m.dim() == u.dim(),
            "matvec requires a matrix and a vector of equal dimension");
    std::vector<Poly> c;
    for (int i = 0; i < m.dim(); ++i) {
        Poly s(m.dim());
        for (int j = 0; j < m.dim(); ++j) s += m(i, j) * u[j];
        c.push_back(std::move(s));
    }
    return TensorField::vector(std::move(c));
}

TensorField vecmat(const TensorField& u, const TensorField& m) { return matvec(transpose(m), u); }

TensorField matmul(const TensorField& a, const TensorField& b) {
    require(a.shape() == Shape::matrix && b.shape() == Shape::matrix && a.dim() == b.dim(),
            "matmul requires matrices of equal dimension");
    const int n = a.dim();
    std::vector<Poly> e;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Poly s(n);
            for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
            e.push_back(std::move(s));
        }
    return TensorField::matrix(n, std::move(e));
}

TensorField cross(const TensorField& u, const TensorField& v) {
    require(u.shape() == Shape::vector && v.shape() == Shape::vector, "cross product requires vectors");
    require_dim3(u, "cross product");
    require_dim3(v, "cross product");
    std::vector<Poly> c;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        c.push_back(u[j] * v[k] - u[k] * v[j]);
    }
    return TensorField::vector(std::move(c));
}

TensorField vec_skw(const TensorField& w) {
    if (w.dim() == 2) {
        require(w.shape() == Shape::scalar, "2D Skw expects a scalar");
        const Poly& s = w.value();
        return TensorField::matrix(2, {Poly(2), -s, s, Poly(2)}, Symmetry::skew);
    }
    require(w.shape() == Shape::vector, "Skw expects a vector");
    const Poly z(3);
    return TensorField::matrix(3, {z, -w[2], w[1], w[2], z, -w[0], -w[1], w[0], z}, Symmetry::skew);
}

TensorField skw_vec(const TensorField& m) {
    require(m.shape() == Shape::matrix, "vec expects a matrix");
    if (!m.satisfies(Symmetry::skew)) throw SymmetryError("vec requires a structurally skew matrix");
    if (m.dim() == 2) return TensorField::scalar(m(1, 0));
    return TensorField::vector({m(2, 1), m(0, 2), m(1, 0)});
}

TensorField cross_left(const TensorField& u, const TensorField& m) {
    require(u.shape() == Shape::vector && m.shape() == Shape::matrix, "u∧M expects a vector and a matrix");
    require_dim3(u, "u∧M");
    require_dim3(m, "u∧M");
    std::vector<Poly> e(9, Poly(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const int s = levi_civita(i, a, b);
                    if (s == 0) continue;
                    e[std::size_t(i * 3 + j)] += Rat(s) * (u[a] * m(b, j));
                }
    return TensorField::matrix(3, std::move(e));
}

TensorField cross_right(const TensorField& m, const TensorField& u) {
    require(u.shape() == Shape::vector && m.shape() == Shape::matrix, "M∧u expects a matrix and a vector");
    require_dim3(u, "M∧u");
    require_dim3(m, "M∧u");
    std::vector<Poly> e(9, Poly(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const int s = levi_civita(j, a, b);
                    if (s == 0) continue;
                    e[std::size_t(i * 3 + j)] += Rat(s) * (m(i, a) * u[b]);
                }
    return TensorField::matrix(3, std::move(e));
}

TensorField s1_op(const TensorField& m) {
    require(m.shape() == Shape::matrix, "S1 expects a matrix");
    require_dim3(m, "S1");
    return transpose(m) - trace(m).value() * TensorField::identity(3);
}

TensorField s1_inv(const TensorField& m) {
    require(m.shape() == Shape::matrix, "S1^-1 expects a matrix");
    require_dim3(m, "S1^-1");
    return transpose(m) - (Rat(1, 2) * trace(m).value()) * TensorField::identity(3);
}

TensorField k_op(const TensorField& v) {
    require(v.shape() == Shape::vector, "K expects a vector-valued coefficient");
    const auto x = TensorField::position(v.dim());
    return skw(Rat(2) * outer(x, v));
}

TensorField perp(const TensorField& u) {
    require(u.shape() == Shape::vector, "perp expects a vector");
    if (u.dim() != 2) throw ShapeError("perp requires a 2D vector");
    return TensorField::vector({u[1], -u[0]});
}

}  // namespace kroner
