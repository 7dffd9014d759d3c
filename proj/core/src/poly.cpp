#include "kroner/poly.hpp"

#include <algorithm>
#include <sstream>

#include "kroner/errors.hpp"

namespace kroner {

Rat make_rat(const std::string& num, const std::string& den) {
    Rat r;
    try {
        r = Rat(mpz_class(num, 10), mpz_class(den, 10));
    } catch (const std::invalid_argument&) {
        throw ParseError("invalid rational '" + num + "/" + den + "'");
    }
    if (r.get_den() == 0) throw ParseError("zero denominator in rational");
    r.canonicalize();
    return r;
}

Rat factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rat(f);
}

Rat beta_integral(unsigned a, unsigned b) {
    Rat r = factorial(a) * factorial(b) / factorial(a + b + 1);
    r.canonicalize();
    return r;
}

int total_degree(const Exponent& e) { return int(e[0]) + int(e[1]) + int(e[2]); }

bool GradedLexLess::operator()(const Exponent& a, const Exponent& b) const {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a > b;
}

Poly::Poly(int dim) : dim_(dim) {
    if (dim != 2 && dim != 3) throw ShapeError("polynomial dimension must be 2 or 3");
}

Poly Poly::constant(int dim, const Rat& c) { return monomial(dim, Exponent{}, c); }

Poly Poly::variable(int dim, int i) {
    if (i < 0 || i >= dim) throw ShapeError("variable index out of range");
    Exponent e{};
    e[i] = 1;
    return monomial(dim, e);
}

Poly Poly::monomial(int dim, const Exponent& e, const Rat& c) {
    Poly p(dim);
    if (dim == 2 && e[2] != 0) throw ShapeError("exponent uses x3 in a 2D polynomial");
    if (c != 0) {
        p.terms_.push_back({e, c});
        p.terms_.back().coeff.canonicalize();
    }
    return p;
}

std::vector<Exponent> Poly::monomials_of_degree(int dim, int r) {
    std::vector<Exponent> out;
    if (r < 0) return out;
    if (dim == 2) {
        for (int a = r; a >= 0; --a) out.push_back({std::uint8_t(a), std::uint8_t(r - a), 0});
    } else {
        for (int a = r; a >= 0; --a)
            for (int b = r - a; b >= 0; --b)
                out.push_back({std::uint8_t(a), std::uint8_t(b), std::uint8_t(r - a - b)});
    }
    return out;
}

std::vector<Exponent> Poly::monomials_up_to(int dim, int max_degree) {
    std::vector<Exponent> out;
    for (int r = 0; r <= max_degree; ++r) {
        auto m = monomials_of_degree(dim, r);
        out.insert(out.end(), m.begin(), m.end());
    }
    return out;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_[0].exp) == 0);
}

int Poly::degree() const { return terms_.empty() ? -1 : total_degree(terms_.back().exp); }

int Poly::min_degree() const { return terms_.empty() ? -1 : total_degree(terms_.front().exp); }

bool Poly::is_homogeneous(int r) const {
    return terms_.empty() || (min_degree() == r && degree() == r);
}

bool Poly::is_homogeneous() const { return terms_.empty() || min_degree() == degree(); }

Rat Poly::coefficient(const Exponent& e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, const Exponent& x) { return GradedLexLess{}(t.exp, x); });
    if (it != terms_.end() && it->exp == e) return it->coeff;
    return Rat(0);
}

void Poly::check_dim(const Poly& o) const {
    if (dim_ != o.dim_) throw ShapeError("polynomial dimension mismatch");
}

Poly& Poly::operator+=(const Poly& o) {
    check_dim(o);
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) {
        terms_ = o.terms_;
        return *this;
    }
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    GradedLexLess less;
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() && b != o.terms_.end()) {
        if (less(a->exp, b->exp)) {
            out.push_back(std::move(*a++));
        } else if (less(b->exp, a->exp)) {
            out.push_back(*b++);
        } else {
            Rat c = a->coeff + b->coeff;
            if (c != 0) out.push_back({a->exp, std::move(c)});
            ++a;
            ++b;
        }
    }
    for (; a != terms_.end(); ++a) out.push_back(std::move(*a));
    for (; b != o.terms_.end(); ++b) out.push_back(*b);
    terms_ = std::move(out);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= c;
    return *this;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    a.check_dim(b);
    Poly r(a.dim_);
    if (a.is_zero() || b.is_zero()) return r;
    std::map<Exponent, Rat, GradedLexLess> acc;
    for (const auto& ta : a.terms_) {
        for (const auto& tb : b.terms_) {
            Exponent e{};
            for (int i = 0; i < 3; ++i) e[i] = std::uint8_t(ta.exp[i] + tb.exp[i]);
            auto [it, inserted] = acc.try_emplace(e, ta.coeff * tb.coeff);
            if (!inserted) it->second += ta.coeff * tb.coeff;
        }
    }
    r.terms_.reserve(acc.size());
    for (auto& [e, c] : acc)
        if (c != 0) r.terms_.push_back({e, std::move(c)});
    return r;
}

bool Poly::operator==(const Poly& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

void Poly::normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return GradedLexLess{}(x.exp, y.exp); });
    std::vector<Term> out;
    for (auto& t : terms_) {
        t.coeff.canonicalize();
        if (!out.empty() && out.back().exp == t.exp) {
            out.back().coeff += t.coeff;
        } else {
            out.push_back(std::move(t));
        }
    }
    std::erase_if(out, [](const Term& t) { return t.coeff == 0; });
    terms_ = std::move(out);
}

Poly Poly::derivative(int i) const {
    if (i < 0 || i >= dim_) throw ShapeError("derivative index out of range");
    Poly r(dim_);
    for (const auto& t : terms_) {
        if (t.exp[i] == 0) continue;
        Exponent e = t.exp;
        Rat c = t.coeff * int(e[i]);
        --e[i];
        r.terms_.push_back({e, std::move(c)});
    }
    r.normalize();
    return r;
}

Rat Poly::evaluate(std::span<const Rat> x) const {
    if (int(x.size()) < dim_) throw ShapeError("evaluation point has too few coordinates");
    Rat sum = 0;
    for (const auto& t : terms_) {
        Rat v = t.coeff;
        for (int i = 0; i < dim_; ++i) {
            for (int k = 0; k < t.exp[i]; ++k) v *= x[i];
        }
        sum += v;
    }
    return sum;
}

double Poly::evaluate(std::span<const double> x) const {
    if (int(x.size()) < dim_) throw ShapeError("evaluation point has too few coordinates");
    double sum = 0.0;
    for (const auto& t : terms_) {
        double v = t.coeff.get_d();
        for (int i = 0; i < dim_; ++i) {
            for (int k = 0; k < t.exp[i]; ++k) v *= x[i];
        }
        sum += v;
    }
    return sum;
}

std::vector<Poly> Poly::scale_substitution() const {
    std::vector<Poly> out(std::size_t(std::max(degree(), -1) + 1), Poly(dim_));
    for (const auto& t : terms_) out[std::size_t(total_degree(t.exp))].terms_.push_back(t);
    return out;
}

Poly Poly::translate(std::span<const Rat> c) const {
    if (int(c.size()) < dim_) throw ShapeError("translation vector has too few coordinates");
    // Powers (x_i + c_i)^k, built lazily per variable.
    std::array<std::vector<Poly>, 3> powers;
    for (int i = 0; i < dim_; ++i) powers[i].push_back(constant(dim_, 1));
    auto power = [&](int i, int k) -> const Poly& {
        while (int(powers[i].size()) <= k)
            powers[i].push_back(powers[i].back() * (variable(dim_, i) + constant(dim_, c[i])));
        return powers[i][std::size_t(k)];
    };
    Poly r(dim_);
    for (const auto& t : terms_) {
        Poly term = constant(dim_, t.coeff);
        for (int i = 0; i < dim_; ++i)
            if (t.exp[i] > 0) term = term * power(i, t.exp[i]);
        r += term;
    }
    return r;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rat c = t.coeff;
        const bool negative = c < 0;
        if (negative) c = -c;
        if (first) {
            if (negative) os << "-";
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        const bool unit = total_degree(t.exp) > 0;
        if (!(unit && c == 1)) {
            os << c.get_str();
            if (unit) os << "*";
        }
        bool need_star = false;
        for (int i = 0; i < dim_; ++i) {
            if (t.exp[i] == 0) continue;
            if (need_star) os << "*";
            os << "x" << (i + 1);
            if (t.exp[i] > 1) os << "^" << int(t.exp[i]);
            need_star = true;
        }
    }
    return os.str();
}

Poly HomoDecomp::sum(int dim) const {
    Poly s(dim);
    for (const auto& [r, p] : parts) s += p;
    return s;
}

HomoDecomp homogeneous_parts(const Poly& p) {
    HomoDecomp d;
    auto graded = p.scale_substitution();
    for (std::size_t r = 0; r < graded.size(); ++r)
        if (!graded[r].is_zero()) d.parts.emplace(int(r), std::move(graded[r]));
    return d;
}

Poly radial_beta_transform(const Poly& p, unsigned a, unsigned b) {
    Poly r(p.dim());
    auto graded = p.scale_substitution();
    for (std::size_t deg = 0; deg < graded.size(); ++deg) {
        if (graded[deg].is_zero()) continue;
        r += graded[deg] * beta_integral(a + unsigned(deg), b);
    }
    return r;
}

}  // namespace kroner
