#include "kroner/pathintegral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <gsl/gsl_integration.h>

#include "kroner/errors.hpp"

namespace kroner {

// PathSpec -----------------------------------------------------------------------

PathSpec::PathSpec(std::vector<std::vector<double>> vertices) : v_(std::move(vertices)) {
    if (v_.size() < 2) throw PathError("path needs at least two vertices");
    dim_ = int(v_.front().size());
    if (dim_ != 2 && dim_ != 3) throw PathError("path vertices must have 2 or 3 coordinates");
    for (std::size_t i = 0; i < v_.size(); ++i) {
        if (int(v_[i].size()) != dim_) throw PathError("vertex " + std::to_string(i) + " has the wrong number of coordinates");
        for (double c : v_[i])
            if (!std::isfinite(c)) throw PathError("vertex " + std::to_string(i) + " has a non-finite coordinate");
        if (i > 0 && v_[i] == v_[i - 1])
            throw PathError("vertices " + std::to_string(i - 1) + " and " + std::to_string(i) + " coincide (zero-length segment)");
    }
}

double PathSpec::length() const {
    double len = 0;
    for (std::size_t s = 0; s + 1 < v_.size(); ++s) {
        double q = 0;
        for (int k = 0; k < dim_; ++k) q += (v_[s + 1][k] - v_[s][k]) * (v_[s + 1][k] - v_[s][k]);
        len += std::sqrt(q);
    }
    return len;
}

bool PathSpec::is_closed(double tol) const {
    for (int k = 0; k < dim_; ++k)
        if (std::abs(v_.front()[k] - v_.back()[k]) > tol) return false;
    return true;
}

PathSpec PathSpec::straight(std::vector<double> from, std::vector<double> to) {
    return PathSpec({std::move(from), std::move(to)});
}

PathSpec unit_square_loop(int dim, int a, int b) {
    if ((dim != 2 && dim != 3) || a < 0 || b < 0 || a >= dim || b >= dim || a == b)
        throw PathError("invalid coordinate plane for the unit square");
    std::vector<double> p0(std::size_t(dim), 0.0), p1 = p0, p2 = p0, p3 = p0;
    p1[std::size_t(a)] = 1;
    p2[std::size_t(a)] = 1;
    p2[std::size_t(b)] = 1;
    p3[std::size_t(b)] = 1;
    return PathSpec({p0, p1, p2, p3, p0});
}

void QuadSpec::validate() const {
    if (gauss_order < 2) throw PathError("Gauss order must be at least 2");
    if (subdivisions < 1) throw PathError("subdivisions must be at least 1");
}

// StrainSource ------------------------------------------------------------------

StrainSource StrainSource::polynomial(const TensorField& e) {
    if (e.shape() != Shape::matrix) throw ShapeError("strain must be a matrix field");
    if (!e.satisfies(Symmetry::symmetric)) throw SymmetryError("strain must be symmetric");
    StrainSource s;
    s.dim_ = e.dim();
    s.poly_ = std::make_shared<const TensorField>(e);
    std::vector<TensorField> d;
    for (int k = 0; k < e.dim(); ++k) d.push_back(e.map([k](const Poly& p) { return p.derivative(k); }));
    s.dpoly_ = std::make_shared<const std::vector<TensorField>>(std::move(d));
    return s;
}

StrainSource StrainSource::callable(int dim, FullEval f, bool thread_safe) {
    if (dim != 2 && dim != 3) throw ShapeError("dimension must be 2 or 3");
    if (!f) throw PreconditionError("empty evaluator");
    StrainSource s;
    s.dim_ = dim;
    s.thread_safe_ = thread_safe;
    s.full_ = std::move(f);
    return s;
}

StrainSource StrainSource::finite_difference(int dim, ValueEval f, double h, bool thread_safe) {
    if (!(h > 0)) throw PreconditionError("finite-difference step must be positive");
    if (!f) throw PreconditionError("empty evaluator");
    StrainSource s = callable(
        dim,
        [dim, f, h](const double* y, double* e, double* de) {
            const std::size_t nn = std::size_t(dim * dim);
            f(y, e);
            std::vector<double> yp(y, y + dim), ym(y, y + dim), ep(nn), em(nn);
            for (int k = 0; k < dim; ++k) {
                yp[std::size_t(k)] = y[k] + h;
                ym[std::size_t(k)] = y[k] - h;
                f(yp.data(), ep.data());
                f(ym.data(), em.data());
                for (std::size_t q = 0; q < nn; ++q) de[std::size_t(k) * nn + q] = (ep[q] - em[q]) / (2 * h);
                yp[std::size_t(k)] = y[k];
                ym[std::size_t(k)] = y[k];
            }
        },
        thread_safe);
    s.fd_ = true;
    return s;
}

void StrainSource::sample(const double* y, StrainSample& out) const {
    const int n = dim_;
    const std::size_t nn = std::size_t(n * n);
    out.e.assign(nn, 0.0);
    out.de.assign(nn * std::size_t(n), 0.0);
    if (poly_) {
        const std::span<const double> pt(y, std::size_t(n));
        for (std::size_t q = 0; q < nn; ++q) out.e[q] = poly_->entries()[q].evaluate(pt);
        for (int k = 0; k < n; ++k)
            for (std::size_t q = 0; q < nn; ++q) out.de[std::size_t(k) * nn + q] = (*dpoly_)[std::size_t(k)].entries()[q].evaluate(pt);
        return;
    }
    full_(y, out.e.data(), out.de.data());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(out.e[std::size_t(i * n + j)] - out.e[std::size_t(j * n + i)]) > 1e-12)
                throw SymmetryError("strain evaluator returned a non-symmetric matrix (entry " + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ")");
}

// Quadrature ----------------------------------------------------------------------

namespace {

struct GLRule {
    std::vector<double> nodes, weights;  // on [0, 1]
};

const GLRule& gauss_legendre(int order) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GLRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[order];
    if (!slot) {
        std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> t(
            gsl_integration_glfixed_table_alloc(std::size_t(order)), &gsl_integration_glfixed_table_free);
        if (!t) throw PreconditionError("could not build Gauss-Legendre rule");
        auto r = std::make_unique<GLRule>();
        for (int i = 0; i < order; ++i) {
            double xi = 0, wi = 0;
            gsl_integration_glfixed_point(0.0, 1.0, std::size_t(i), &xi, &wi, t.get());
            r->nodes.push_back(xi);
            r->weights.push_back(wi);
        }
        slot = std::move(r);
    }
    return *slot;
}

/// Integrand of the index form along the path, with x the evaluation point.
std::vector<double> integrate(const StrainSource& src, const PathSpec& path, const QuadSpec& quad, const std::vector<double>& x) {
    quad.validate();
    if (src.dim() != path.dim()) throw PathError("path and strain dimensions differ");
    const int n = path.dim();
    const std::size_t nn = std::size_t(n * n);
    const GLRule& rule = gauss_legendre(quad.gauss_order);
    std::vector<double> u(std::size_t(n), 0.0), y(std::size_t(n), 0.0), dy(std::size_t(n), 0.0);
    StrainSample s;
    const auto& v = path.vertices();
    for (std::size_t seg = 0; seg + 1 < v.size(); ++seg) {
        for (int sub = 0; sub < quad.subdivisions; ++sub) {
            const double t0 = double(sub) / quad.subdivisions, t1 = double(sub + 1) / quad.subdivisions;
            for (int k = 0; k < n; ++k) dy[std::size_t(k)] = (v[seg + 1][std::size_t(k)] - v[seg][std::size_t(k)]) * (t1 - t0);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double tau = t0 + (t1 - t0) * rule.nodes[q];
                for (int k = 0; k < n; ++k)
                    y[std::size_t(k)] = v[seg][std::size_t(k)] + tau * (v[seg + 1][std::size_t(k)] - v[seg][std::size_t(k)]);
                src.sample(y.data(), s);
                for (int i = 0; i < n; ++i) {
                    double acc = 0;
                    for (int j = 0; j < n; ++j) {
                        double m = s.e[std::size_t(i * n + j)];
                        for (int k = 0; k < n; ++k)
                            m += (s.de[std::size_t(k) * nn + std::size_t(i * n + j)] - s.de[std::size_t(i) * nn + std::size_t(k * n + j)]) *
                                 (x[std::size_t(k)] - y[std::size_t(k)]);
                        acc += m * dy[std::size_t(j)];
                    }
                    u[std::size_t(i)] += rule.weights[q] * acc;
                }
            }
        }
    }
    return u;
}

}  // namespace

std::vector<double> cesaro_volterra(const StrainSource& e, const PathSpec& path, const QuadSpec& quad) {
    return integrate(e, path, quad, path.end());
}

RecoveryResult cesaro_volterra_estimate(const StrainSource& e, const PathSpec& path, const QuadSpec& quad) {
    RecoveryResult r;
    r.displacement = cesaro_volterra(e, path, quad);
    QuadSpec fine = quad;
    fine.gauss_order *= 2;
    const auto u2 = cesaro_volterra(e, path, fine);
    for (std::size_t i = 0; i < u2.size(); ++i) r.error_estimate = std::max(r.error_estimate, std::abs(u2[i] - r.displacement[i]));
    r.finite_difference = e.uses_finite_differences();
    return r;
}

double path_independence(const StrainSource& e, const std::vector<PathSpec>& paths, const QuadSpec& quad) {
    if (paths.size() < 2) throw PathError("path independence needs at least two paths");
    for (std::size_t p = 1; p < paths.size(); ++p)
        if (paths[p].start() != paths[0].start() || paths[p].end() != paths[0].end())
            throw PathError("path " + std::to_string(p) + " does not share the end points of path 0");
    std::vector<std::vector<double>> u;
    for (const auto& p : paths) u.push_back(cesaro_volterra(e, p, quad));
    double dev = 0;
    for (std::size_t a = 0; a < u.size(); ++a)
        for (std::size_t b = a + 1; b < u.size(); ++b)
            for (std::size_t i = 0; i < u[a].size(); ++i) dev = std::max(dev, std::abs(u[a][i] - u[b][i]));
    return dev;
}

std::vector<double> defect_loop(const StrainSource& e, const PathSpec& loop, const QuadSpec& quad) {
    if (!loop.is_closed()) throw PathError("defect loop must be closed (first vertex = last vertex)");
    return integrate(e, loop, quad, loop.start());
}

}  // namespace kroner
