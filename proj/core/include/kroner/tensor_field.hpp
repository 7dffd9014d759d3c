#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kroner/poly.hpp"

namespace kroner {

enum class Shape { scalar, vector, matrix };
enum class Symmetry { none, symmetric, skew };

std::string to_string(Shape s);
std::string to_string(Symmetry s);

/// Scalar, vector or matrix field with polynomial entries.
///
/// Matrices are stored row-major. A symmetric/skew tag is checked entry by
/// entry when the field is built; operations that cannot guarantee the tag
/// return untagged (Symmetry::none) results.
class TensorField {
public:
    TensorField() = default;

    static TensorField scalar(Poly p);
    static TensorField vector(std::vector<Poly> comps);
    static TensorField matrix(int dim, std::vector<Poly> row_major, Symmetry sym = Symmetry::none);
    static TensorField zero(int dim, Shape shape, Symmetry sym = Symmetry::none);
    /// The position field x.
    static TensorField position(int dim);
    static TensorField identity(int dim);
    /// Constant unit vector e_{i+1}.
    static TensorField unit_vector(int dim, int i);
    /// Canonical 2D skew matrix χ = [[0,-1],[1,0]].
    static TensorField chi();

    int dim() const { return dim_; }
    Shape shape() const { return shape_; }
    Symmetry symmetry() const { return symmetry_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<Poly>& entries() const { return entries_; }

    const Poly& operator[](int i) const;
    const Poly& operator()(int i, int j) const;
    const Poly& value() const;

    /// Re-tag; throws SymmetryError if the entries do not satisfy the tag.
    TensorField with_symmetry(Symmetry sym) const;
    bool satisfies(Symmetry sym) const;

    bool is_zero() const;
    /// Highest entry degree, -1 for the zero field.
    int degree() const;
    bool is_homogeneous(int r) const;

    TensorField& operator+=(const TensorField& o);
    TensorField& operator-=(const TensorField& o);
    friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
    friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
    friend TensorField operator*(const Rat& c, const TensorField& a);
    friend TensorField operator*(const Poly& p, const TensorField& a);
    TensorField operator-() const;

    /// Structural equality of values; symmetry tags are ignored.
    bool operator==(const TensorField& o) const;

    /// Applies f to every entry, keeping shape; the tag is kept when f is linear.
    TensorField map(const std::function<Poly(const Poly&)>& f) const;

    std::string to_string() const;

private:
    TensorField(int dim, Shape shape, Symmetry sym, std::vector<Poly> entries);
    void check_same(const TensorField& o) const;

    int dim_ = 3;
    Shape shape_ = Shape::scalar;
    Symmetry symmetry_ = Symmetry::none;
    std::vector<Poly> entries_;
};

/// 𝕎 = 𝕂 × 𝕍: a skew matrix field together with a vector field.
struct WPairField {
    TensorField skew;
    TensorField vec;

    WPairField() = default;
    WPairField(TensorField skew_part, TensorField vec_part);
    bool operator==(const WPairField& o) const { return skew == o.skew && vec == o.vec; }
};

// Pointwise algebra -------------------------------------------------------

TensorField sym(const TensorField& a);
TensorField skw(const TensorField& a);
TensorField transpose(const TensorField& a);
TensorField trace(const TensorField& a);
/// A : B = Σ A_ij B_ij.
TensorField frobenius(const TensorField& a, const TensorField& b);
/// (u ⊗ v)_ij = u_i v_j.
TensorField outer(const TensorField& u, const TensorField& v);
TensorField dot(const TensorField& u, const TensorField& v);
/// M·u.
TensorField matvec(const TensorField& m, const TensorField& u);
/// u·M.
TensorField vecmat(const TensorField& u, const TensorField& m);
TensorField matmul(const TensorField& a, const TensorField& b);
/// u ∧ v (3D cross product).
TensorField cross(const TensorField& u, const TensorField& v);

/// Skw(w): the skew matrix with Skw(w)·a = w ∧ a (3D). In 2D a scalar w maps to w·χ.
TensorField vec_skw(const TensorField& w);
/// Inverse of vec_skw; the argument must be structurally skew.
TensorField skw_vec(const TensorField& m);

/// u ∧ M: cross product of u with every column of M, (u∧M)_ij = ε_iab u_a M_bj.
TensorField cross_left(const TensorField& u, const TensorField& m);
/// M ∧ u: cross product of every row of M with u, (M∧u)_ij = ε_jab M_ia u_b.
TensorField cross_right(const TensorField& m, const TensorField& u);

/// S₁W = Wᵀ - tr(W) I.
TensorField s1_op(const TensorField& m);
/// S₁⁻¹U = Uᵀ - ½ tr(U) I.
TensorField s1_inv(const TensorField& m);

/// K(ω) = x⊗ω - ω⊗x for a vector field ω; always skew.
TensorField k_op(const TensorField& v);

/// (u₁, u₂) ↦ (u₂, -u₁).
TensorField perp(const TensorField& u);

/// Levi-Civita symbol ε_ijk for 0-based indices.
int levi_civita(int i, int j, int k);

}  // namespace kroner
