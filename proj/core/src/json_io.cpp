#include "kroner/json_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "kroner/errors.hpp"

namespace kroner {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw ParseError("could not format double");
    return std::string(buf, end);
}

namespace {

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

/// Unsigned decimal literal "12", "1.25", "3e-2" as an exact rational.
Rat parse_decimal(const std::string& s) {
    std::string mant = s, expo;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        mant = s.substr(0, e);
        expo = s.substr(e + 1);
    }
    std::string ip = mant, fp;
    if (auto d = mant.find('.'); d != std::string::npos) {
        ip = mant.substr(0, d);
        fp = mant.substr(d + 1);
    }
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
        throw ParseError("malformed number '" + s + "'");
    Rat r = make_rat((ip.empty() ? "0" : ip) + fp, "1" + std::string(fp.size(), '0'));
    if (!expo.empty()) {
        bool neg = false;
        std::size_t i = 0;
        if (expo[0] == '+' || expo[0] == '-') {
            neg = expo[0] == '-';
            i = 1;
        }
        const std::string ed = expo.substr(i);
        if (!all_digits(ed) || ed.size() > 4) throw ParseError("malformed exponent in '" + s + "'");
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 10, std::stoul(ed));
        r = neg ? Rat(r / Rat(p)) : Rat(r * Rat(p));
    }
    r.canonicalize();
    return r;
}

}  // namespace

Rat parse_rat(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty number");
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    Rat r;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        const Rat den = parse_decimal(s.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + raw + "'");
        r = parse_decimal(s.substr(0, slash)) / den;
    } else {
        r = parse_decimal(s);
    }
    r.canonicalize();
    return neg ? Rat(-r) : r;
}

namespace {

class PolyParser {
public:
    PolyParser(int dim, const std::string& s) : dim_(dim), s_(s) {}

    Poly parse() {
        Poly acc(dim_);
        skip();
        if (pos_ == s_.size()) throw error("empty polynomial");
        bool first = true;
        while (pos_ < s_.size()) {
            int sign = 1;
            if (s_[pos_] == '+' || s_[pos_] == '-') {
                sign = s_[pos_] == '-' ? -1 : 1;
                ++pos_;
                skip();
            } else if (!first) {
                throw error("expected '+' or '-'");
            }
            acc += Rat(sign) * term();
            first = false;
            skip();
        }
        return acc;
    }

private:
    ParseError error(const std::string& what) const {
        return ParseError("polynomial '" + s_ + "': " + what + " at position " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    Poly term() {
        Poly t = factor();
        skip();
        while (pos_ < s_.size() && (s_[pos_] == '*' || s_[pos_] == '/')) {
            const char op = s_[pos_++];
            skip();
            if (op == '/') {
                const Rat d = number();
                if (d == 0) throw error("division by zero");
                t *= Rat(1 / d);
            } else {
                t = t * factor();
            }
            skip();
        }
        return t;
    }
    Poly factor() {
        skip();
        if (pos_ >= s_.size()) throw error("unexpected end");
        if (s_[pos_] == 'x') {
            ++pos_;
            const std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (st == pos_) throw error("variable needs an index");
            const int idx = std::stoi(s_.substr(st, pos_ - st));
            if (idx < 1 || idx > dim_) throw error("variable x" + std::to_string(idx) + " out of range");
            int power = 1;
            skip();
            if (pos_ < s_.size() && s_[pos_] == '^') {
                ++pos_;
                skip();
                const std::size_t ps = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                if (ps == pos_) throw error("exponent must be a non-negative integer");
                power = std::stoi(s_.substr(ps, pos_ - ps));
                if (power > 60) throw error("exponent too large");
            }
            Exponent e{};
            e[std::size_t(idx - 1)] = std::uint8_t(power);
            return Poly::monomial(dim_, e);
        }
        return Poly::constant(dim_, number());
    }
    Rat number() {
        const std::size_t st = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                    ((s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ > st) ||
                                    ((s_[pos_] == '-' || s_[pos_] == '+') && pos_ > st && (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
            ++pos_;
        if (st == pos_) throw error("expected a number or variable");
        return parse_decimal(s_.substr(st, pos_ - st));
    }

    int dim_;
    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(int dim, const std::string& s) {
    if (dim < 1 || dim > 3) throw ParseError("polynomial dimension must be 1..3");
    return PolyParser(dim, s).parse();
}

nlohmann::json poly_to_json(const Poly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : p.terms()) {
        nlohmann::json e = nlohmann::json::array();
        for (int i = 0; i < p.dim(); ++i) e.push_back(int(t.exp[std::size_t(i)]));
        terms.push_back({{"exp", e}, {"coef", t.coeff.get_str()}});
    }
    return {{"terms", terms}};
}

Poly poly_from_json(int dim, const nlohmann::json& j) {
    if (j.is_string()) return parse_poly(dim, j.get<std::string>());
    if (j.is_number_integer()) return Poly::constant(dim, Rat(j.get<long>()));
    if (j.is_number()) return Poly::constant(dim, parse_rat(format_double(j.get<double>())));
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
        throw ParseError("polynomial must be a string, a number or an object with a \"terms\" array");
    Poly p(dim);
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("exp") || !t["exp"].is_array() || int(t["exp"].size()) != dim)
            throw ParseError("polynomial term needs an \"exp\" array of length " + std::to_string(dim));
        Exponent e{};
        for (int i = 0; i < dim; ++i) {
            const auto& x = t["exp"][std::size_t(i)];
            if (!x.is_number_integer() || x.get<long>() < 0) throw ParseError("exponents must be non-negative integers");
            const auto v = x.get<long>();
            if (v > 60) throw ParseError("exponent too large");
            e[std::size_t(i)] = std::uint8_t(v);
        }
        Rat c;
        if (t.contains("coef")) {
            const auto& c_ = t["coef"];
            if (c_.is_string()) c = parse_rat(c_.get<std::string>());
            else if (c_.is_number_integer()) c = Rat(c_.get<long>());
            else throw ParseError("\"coef\" must be a string or an integer");
        } else {
            throw ParseError("polynomial term needs \"coef\"");
        }
        p += Poly::monomial(dim, e, c);
    }
    return p;
}

nlohmann::json field_to_json(const TensorField& f) {
    nlohmann::json j;
    j["dim"] = f.dim();
    j["shape"] = to_string(f.shape());
    auto str = [](const Poly& p) { return p.to_string(); };
    switch (f.shape()) {
        case Shape::scalar: j["value"] = str(f.value()); break;
        case Shape::vector:
            j["entries"] = nlohmann::json::object();
            for (int i = 0; i < f.dim(); ++i)
                if (!f[i].is_zero()) j["entries"][std::to_string(i + 1)] = str(f[i]);
            break;
        case Shape::matrix:
            j["entries"] = nlohmann::json::object();
            for (int i = 0; i < f.dim(); ++i)
                for (int k = 0; k < f.dim(); ++k)
                    if (!f(i, k).is_zero()) j["entries"][std::to_string(i + 1) + "," + std::to_string(k + 1)] = str(f(i, k));
            break;
    }
    return j;
}

namespace {

std::pair<int, int> parse_key(const std::string& key, int dim, bool matrix) {
    auto idx = [&](const std::string& s) {
        std::string t;
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c))) t += c;
        if (!all_digits(t)) throw ParseError("bad entry key '" + key + "'");
        const int v = std::stoi(t);
        if (v < 1 || v > dim) throw ParseError("entry key '" + key + "' out of range 1.." + std::to_string(dim));
        return v - 1;
    };
    const auto comma = key.find(',');
    if (matrix) {
        if (comma == std::string::npos) throw ParseError("matrix entry key '" + key + "' must look like \"i,j\"");
        return {idx(key.substr(0, comma)), idx(key.substr(comma + 1))};
    }
    if (comma != std::string::npos) throw ParseError("vector entry key '" + key + "' must be a single index");
    return {idx(key), 0};
}

}  // namespace

TensorField field_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("field JSON must be an object");
    if (!j.contains("dim") || !j["dim"].is_number_integer()) throw ParseError("field JSON needs an integer \"dim\"");
    const int dim = j["dim"].get<int>();
    if (dim != 2 && dim != 3) throw ParseError("\"dim\" must be 2 or 3");
    const std::string shape = j.value("shape", std::string("matrix"));
    if (shape == "scalar") {
        if (!j.contains("value")) throw ParseError("scalar field needs \"value\"");
        return TensorField::scalar(poly_from_json(dim, j["value"]));
    }
    if (shape != "vector" && shape != "matrix") throw ParseError("\"shape\" must be scalar, vector or matrix");
    const bool matrix = shape == "matrix";
    const nlohmann::json entries = j.value("entries", nlohmann::json::object());
    if (!entries.is_object()) throw ParseError("\"entries\" must be an object");
    std::vector<Poly> e(std::size_t(matrix ? dim * dim : dim), Poly(dim));
    std::vector<bool> seen(e.size(), false);
    for (const auto& [key, val] : entries.items()) {
        const auto [a, b] = parse_key(key, dim, matrix);
        const std::size_t q = matrix ? std::size_t(a * dim + b) : std::size_t(a);
        if (seen[q]) throw ParseError("entry '" + key + "' given twice");
        seen[q] = true;
        try {
            e[q] = poly_from_json(dim, val);
        } catch (const ParseError& err) {
            throw ParseError("entry " + key + ": " + err.what());
        }
    }
    if (!matrix) return TensorField::vector(std::move(e));
    return TensorField::matrix(dim, std::move(e));
}

TensorField symmetric_field_from_json(const nlohmann::json& j) {
    TensorField f = field_from_json(j);
    if (f.shape() != Shape::matrix) throw ShapeError("expected a matrix field");
    const int n = f.dim();
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            if (!(f(i, k) == f(k, i)))
                throw SymmetryError("field is not symmetric: entry " + std::to_string(i + 1) + "," + std::to_string(k + 1) + " (" +
                                    f(i, k).to_string() + ") differs from entry " + std::to_string(k + 1) + "," +
                                    std::to_string(i + 1) + " (" + f(k, i).to_string() + ")");
    return f.with_symmetry(Symmetry::symmetric);
}

nlohmann::json path_to_json(const PathSpec& p) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& pt : p.vertices()) v.push_back(pt);
    return {{"vertices", v}};
}

PathSpec path_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw ParseError("path JSON must be an object with a \"vertices\" array");
    std::vector<std::vector<double>> v;
    for (const auto& pt : j["vertices"]) {
        if (!pt.is_array()) throw ParseError("each vertex must be an array of numbers");
        std::vector<double> c;
        for (const auto& x : pt) {
            if (!x.is_number()) throw ParseError("vertex coordinates must be numbers");
            c.push_back(x.get<double>());
        }
        v.push_back(std::move(c));
    }
    return PathSpec(std::move(v));
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("'" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace kroner
