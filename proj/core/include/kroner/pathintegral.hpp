#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "kroner/tensor_field.hpp"

namespace kroner {

/// Polyline from vertices.front() to vertices.back().
class PathSpec {
public:
    /// Throws PathError on fewer than two vertices, mixed or unsupported
    /// dimensions, non-finite coordinates or repeated consecutive vertices.
    explicit PathSpec(std::vector<std::vector<double>> vertices);

    int dim() const { return dim_; }
    const std::vector<std::vector<double>>& vertices() const { return v_; }
    const std::vector<double>& start() const { return v_.front(); }
    const std::vector<double>& end() const { return v_.back(); }
    std::size_t segments() const { return v_.size() - 1; }
    double length() const;
    bool is_closed(double tol = 0.0) const;

    static PathSpec straight(std::vector<double> from, std::vector<double> to);

private:
    int dim_ = 3;
    std::vector<std::vector<double>> v_;
};

struct QuadSpec {
    int gauss_order = 8;
    int subdivisions = 1;
    /// Throws PathError unless gauss_order ≥ 2 and subdivisions ≥ 1.
    void validate() const;
};

/// Strain data at a point: E (row-major) and dE[k·n·n + i·n + j] = ∂_k E_ij.
struct StrainSample {
    std::vector<double> e;
    std::vector<double> de;
};

/// Either exact polynomial strain or a callable evaluator.
class StrainSource {
public:
    using FullEval = std::function<void(const double* y, double* e, double* de)>;
    using ValueEval = std::function<void(const double* y, double* e)>;

    /// Symmetric polynomial matrix field; derivatives are exact.
    static StrainSource polynomial(const TensorField& e);
    /// Evaluator supplying E and all first partials.
    static StrainSource callable(int dim, FullEval f, bool thread_safe = true);
    /// Evaluator supplying only E; partials by central differences with step h.
    static StrainSource finite_difference(int dim, ValueEval f, double h = 1e-6, bool thread_safe = true);

    int dim() const { return dim_; }
    bool uses_finite_differences() const { return fd_; }
    bool thread_safe() const { return thread_safe_; }
    bool is_polynomial() const { return poly_ != nullptr; }
    const TensorField* polynomial_field() const { return poly_.get(); }

    /// Throws SymmetryError if a callable returns E with |E_ij - E_ji| > 1e-12.
    void sample(const double* y, StrainSample& out) const;

private:
    int dim_ = 3;
    bool fd_ = false;
    bool thread_safe_ = true;
    std::shared_ptr<const TensorField> poly_;
    std::shared_ptr<const std::vector<TensorField>> dpoly_;
    FullEval full_;
};

/// Displacement at the path's end point from the index-form integrand
/// u_i = ∫ [E_ij(y) + (∂_kE_ij(y) - ∂_iE_kj(y))(x_k - y_k)] dy_j.
std::vector<double> cesaro_volterra(const StrainSource& e, const PathSpec& path, const QuadSpec& quad = {});

struct RecoveryResult {
    std::vector<double> displacement;
    /// max_i |u_i(order) - u_i(2·order)|.
    double error_estimate = 0.0;
    bool finite_difference = false;
};

RecoveryResult cesaro_volterra_estimate(const StrainSource& e, const PathSpec& path, const QuadSpec& quad = {});

/// Max pairwise per-component deviation of the recovered displacement.
/// Paths must share start and end points (PathError otherwise).
double path_independence(const StrainSource& e, const std::vector<PathSpec>& paths, const QuadSpec& quad = {});

/// The integrand integrated around a closed loop, evaluated at the loop's base vertex.
std::vector<double> defect_loop(const StrainSource& e, const PathSpec& loop, const QuadSpec& quad = {});

/// Polyline through the corners of an axis-aligned unit square in the (a, b)
/// coordinate plane, starting and ending at the origin.
PathSpec unit_square_loop(int dim, int a, int b);

}  // namespace kroner
