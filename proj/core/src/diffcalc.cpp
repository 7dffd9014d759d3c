#include "kroner/diffcalc.hpp"

#include <array>

#include "kroner/errors.hpp"

namespace kroner {

namespace {

constexpr std::array<std::pair<DiffOpTag, const char*>, 9> kNames{{
    {DiffOpTag::grad, "grad"},
    {DiffOpTag::curl_vec, "curl_vec"},
    {DiffOpTag::div_vec, "div_vec"},
    {DiffOpTag::curl_cols, "curl_cols"},
    {DiffOpTag::curl_rows, "curl_rows"},
    {DiffOpTag::div_rows, "div_rows"},
    {DiffOpTag::def, "def"},
    {DiffOpTag::inc, "inc"},
    {DiffOpTag::air, "air"},
}};

void expect(const TensorField& f, Shape shape, const char* op) {
    if (f.shape() != shape)
        throw ShapeError(std::string(op) + " expects a " + to_string(shape) + " field, got " + to_string(f.shape()));
}

void expect_dim(const TensorField& f, int dim, const char* op) {
    if (f.dim() != dim) throw ShapeError(std::string(op) + " requires dimension " + std::to_string(dim));
}

}  // namespace

std::string to_string(DiffOpTag t) {
    for (const auto& [tag, name] : kNames)
        if (tag == t) return name;
    return "?";
}

std::optional<DiffOpTag> parse_diff_op(const std::string& name) {
    for (const auto& [tag, n] : kNames)
        if (name == n) return tag;
    return std::nullopt;
}

TensorField grad(const TensorField& f) {
    const int n = f.dim();
    if (f.shape() == Shape::scalar) {
        std::vector<Poly> c;
        for (int i = 0; i < n; ++i) c.push_back(f.value().derivative(i));
        return TensorField::vector(std::move(c));
    }
    expect(f, Shape::vector, "grad");
    std::vector<Poly> e;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) e.push_back(f[i].derivative(j));
    return TensorField::matrix(n, std::move(e));
}

TensorField curl_vec(const TensorField& u) {
    expect(u, Shape::vector, "curl_vec");
    expect_dim(u, 3, "curl_vec");
    std::vector<Poly> c;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        c.push_back(u[k].derivative(j) - u[j].derivative(k));
    }
    return TensorField::vector(std::move(c));
}

TensorField div_vec(const TensorField& u) {
    expect(u, Shape::vector, "div_vec");
    Poly s(u.dim());
    for (int i = 0; i < u.dim(); ++i) s += u[i].derivative(i);
    return TensorField::scalar(std::move(s));
}

TensorField curl_cols(const TensorField& m) {
    expect(m, Shape::matrix, "curl_cols");
    expect_dim(m, 3, "curl_cols");
    std::vector<Poly> e(9, Poly(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    if (const int s = levi_civita(i, a, b))
                        e[std::size_t(i * 3 + j)] += Rat(s) * m(b, j).derivative(a);
    return TensorField::matrix(3, std::move(e));
}

TensorField curl_rows(const TensorField& m) {
    expect(m, Shape::matrix, "curl_rows");
    expect_dim(m, 3, "curl_rows");
    std::vector<Poly> e(9, Poly(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    if (const int s = levi_civita(j, a, b))
                        e[std::size_t(i * 3 + j)] += Rat(s) * m(i, b).derivative(a);
    return TensorField::matrix(3, std::move(e));
}

TensorField div_rows(const TensorField& m) {
    expect(m, Shape::matrix, "div_rows");
    std::vector<Poly> c;
    for (int i = 0; i < m.dim(); ++i) {
        Poly s(m.dim());
        for (int j = 0; j < m.dim(); ++j) s += m(i, j).derivative(j);
        c.push_back(std::move(s));
    }
    return TensorField::vector(std::move(c));
}

TensorField scurl(const TensorField& f) {
    expect(f, Shape::scalar, "scurl");
    expect_dim(f, 2, "scurl");
    return TensorField::vector({f.value().derivative(1), -f.value().derivative(0)});
}

TensorField scurl_rows(const TensorField& u) {
    expect(u, Shape::vector, "scurl_rows");
    expect_dim(u, 2, "scurl_rows");
    return TensorField::matrix(2, {u[0].derivative(1), -u[0].derivative(0), u[1].derivative(1), -u[1].derivative(0)});
}

TensorField def_op(const TensorField& u) {
    expect(u, Shape::vector, "def");
    return sym(grad(u));
}

TensorField inc_op(const TensorField& e) {
    expect(e, Shape::matrix, "inc");
    expect_dim(e, 3, "inc");
    if (!e.satisfies(Symmetry::symmetric)) throw SymmetryError("inc requires a symmetric field");
    // ε_ist ε_jlm ∂_s∂_l E_tm is symmetric in (i,j) for symmetric E; the tag is
    // asserted through with_symmetry, which re-checks entry by entry.
    return curl_rows(curl_cols(e)).with_symmetry(Symmetry::symmetric);
}

TensorField air_op(const TensorField& u) {
    expect(u, Shape::scalar, "air");
    expect_dim(u, 2, "air");
    return scurl_rows(scurl(u)).with_symmetry(Symmetry::symmetric);
}

TensorField frank_tensor(const TensorField& e) { return curl_cols(e); }

TensorField apply(DiffOpTag tag, const TensorField& f) {
    switch (tag) {
        case DiffOpTag::grad: return grad(f);
        case DiffOpTag::curl_vec: return curl_vec(f);
        case DiffOpTag::div_vec: return div_vec(f);
        case DiffOpTag::curl_cols: return curl_cols(f);
        case DiffOpTag::curl_rows: return curl_rows(f);
        case DiffOpTag::div_rows: return div_rows(f);
        case DiffOpTag::def: return def_op(f);
        case DiffOpTag::inc: return inc_op(f);
        case DiffOpTag::air: return air_op(f);
    }
    throw ShapeError("unknown differential operator");
}

}  // namespace kroner
