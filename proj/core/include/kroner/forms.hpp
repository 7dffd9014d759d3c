#pragma once

#include <string>
#include <vector>

#include "kroner/tensor_field.hpp"

namespace kroner {

/// Coefficient space of a form. Skew values are stored through vec: three
/// components in 3D, one scalar in 2D (the multiple of χ).
enum class ValueSpace { scalar, vector, skew };

std::string to_string(ValueSpace v);
int value_components(int dim, ValueSpace v);

/// Strictly increasing 0-based index tuple σ.
using MultiIndex = std::vector<int>;

/// All σ of length k over {0..dim-1}, in lexicographic order.
const std::vector<MultiIndex>& form_basis(int dim, int k);
int basis_position(int dim, const MultiIndex& sigma);

/// Value-space valued differential k-form with polynomial coefficients.
///
/// coeff(s, c) is component c of the coefficient of dx_σ, σ = form_basis(dim,k)[s].
class Form {
public:
    Form() = default;
    Form(int dim, int k, ValueSpace vs);

    static Form scalar0(const Poly& f);

    int dim() const { return dim_; }
    int degree() const { return k_; }
    ValueSpace value_space() const { return vs_; }
    int components() const { return value_components(dim_, vs_); }
    std::size_t basis_size() const { return c_.size(); }

    const Poly& coeff(std::size_t s, int comp) const { return c_[s][std::size_t(comp)]; }
    Poly& coeff(std::size_t s, int comp) { return c_[s][std::size_t(comp)]; }
    const Poly& coeff(const MultiIndex& sigma, int comp) const;
    void set(const MultiIndex& sigma, int comp, Poly p);
    /// Coefficient of dx_σ as a vector of components.
    const std::vector<Poly>& values(std::size_t s) const { return c_[s]; }
    std::vector<Poly>& values(std::size_t s) { return c_[s]; }

    bool is_zero() const;
    /// Highest polynomial degree among coefficients, -1 for zero.
    int poly_degree() const;
    bool is_homogeneous(int r) const;

    Form& operator+=(const Form& o);
    Form& operator-=(const Form& o);
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(const Rat& c, Form a);
    Form operator-() const;
    bool operator==(const Form& o) const;

    /// Same-shaped form with every coefficient polynomial replaced by f(p).
    Form map_coeffs(const std::function<Poly(const Poly&)>& f) const;
    /// ω(x + c).
    Form translate(std::span<const Rat> c) const;
    bool same_kind(const Form& o) const;

    std::string to_string() const;

private:
    void check_same(const Form& o) const;

    int dim_ = 3;
    int k_ = 0;
    ValueSpace vs_ = ValueSpace::scalar;
    std::vector<std::vector<Poly>> c_;
};

/// Base point of the Poincaré and Koszul operators.
struct BasePoint {
    std::vector<Rat> coords;

    static BasePoint origin(int dim) { return BasePoint{std::vector<Rat>(std::size_t(dim), Rat(0))}; }
    bool is_origin() const;
};

/// d; throws PreconditionError when k = dim.
Form ext_d(const Form& w);
/// i_v ω for a vector field v; throws when k = 0.
Form interior(const Form& w, const std::vector<Poly>& v);
/// κω = i_{x-x₀} ω.
Form koszul(const Form& w, const BasePoint& x0);
Form koszul(const Form& w);
/// 𝔭ω = ∫₀¹ t^{k-1} i_{x-x₀} ω evaluated on the segment from x₀ to x.
Form poincare(const Form& w, const BasePoint& x0);
Form poincare(const Form& w);
/// Coefficient-wise K(v) = x⊗v - v⊗x, from vector-valued to skew-valued forms.
Form k_form(const Form& w);

/// W-valued form: a skew-valued and a vector-valued form of the same degree.
struct WForm {
    Form skew;
    Form vec;

    WForm() = default;
    WForm(Form skew_part, Form vec_part);
    static WForm zero(int dim, int k);
    int dim() const { return vec.dim(); }
    int degree() const { return vec.degree(); }
    bool is_zero() const { return skew.is_zero() && vec.is_zero(); }
    bool operator==(const WForm& o) const { return skew == o.skew && vec == o.vec; }
    WForm& operator+=(const WForm& o);
    WForm& operator-=(const WForm& o);
    friend WForm operator+(WForm a, const WForm& b) { return a += b; }
    friend WForm operator-(WForm a, const WForm& b) { return a -= b; }
    friend WForm operator*(const Rat& c, WForm a);
    WForm operator-() const;
    std::string to_string() const;
};

// Vector proxies --------------------------------------------------------------

/// Generic proxy of a form. 3D vector/skew values: k=0 vector, k=1 matrix with
/// column j the dx_j coefficient, k=2 matrix with columns dx₂₃, dx₃₁, dx₁₂,
/// k=3 vector; skew coefficients enter through vec. Scalar values: k=0,3
/// scalars, k=1 (a₁,a₂,a₃), k=2 (a₂₃, a₃₁, a₁₂). 2D vector 1-forms use the
/// rotated identification [[w₁₂, -w₁₁],[w₂₂, -w₂₁]].
TensorField proxy(const Form& w);
Form unproxy(const TensorField& f, int k, ValueSpace vs);

/// J₀ (3D): (W, v) ↦ (Skw⁻¹W, Skw v), returned with the matrix in .skew and the vector in .vec.
WPairField j0_proxy(const WForm& w);
WForm j0_unproxy(const WPairField& p);
/// J at top degree (J₃ in 3D, J₂ in 2D): (W, v) dx_top ↦ (W, v).
WPairField jtop_proxy(const WForm& w);
WForm jtop_unproxy(const WPairField& p);

}  // namespace kroner
