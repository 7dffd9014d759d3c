#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kroner/bgg.hpp"
#include "kroner/forms.hpp"
#include "kroner/tensor_field.hpp"

namespace kroner {

enum class OperatorId { P1, P2, P3, P1_2D, P2_2D, K1, K2, K3 };

std::string to_string(OperatorId id);
/// Accepts "P1".."P3", "P1_2D", "P2_2D", "K1".."K3"; throws ParseError otherwise.
OperatorId parse_operator_id(const std::string& s);

/// Sign slot names as they appear in sign reports.
inline constexpr const char* kSlotP1 = "sigma1";
inline constexpr const char* kSlotP2 = "sigma2";
inline constexpr const char* kSlotP3 = "sigma3";
inline constexpr const char* kSlotP2_2D = "sigma2_2d";

/// Probe degree used for the cached startup resolution.
inline constexpr int kSignProbeDegree = 6;

/// σ slots of the printed closed forms; an empty slot means unresolved.
struct Signs {
    std::optional<int> p1, p2, p3, p2_2d;
    static Signs from_reports(const SignReport& r3, const SignReport& r2);
};

/// Printed closed forms as slotted operators over the monomial probe basis.
std::vector<SlottedOperator> printed_operators(int dim, int probe_degree);
/// Runs resolve_signs against the bgg-derived family (uncached).
SignReport resolve_printed_signs(int dim, int probe_degree);
/// Cached resolution at kSignProbeDegree, computed once on first use.
const SignReport& sign_report(int dim);
const Signs& resolved_signs();

// Closed forms with explicit signs -------------------------------------------

/// ∫₀¹E_tx·x dt + σ₁∫₀¹(1-t) x∧(∇×E)_tx·x dt.
TensorField p1_signed(const TensorField& e, int sigma1);
/// σ₂ x∧(∫₀¹t(1-t)V_tx dt)∧x.
TensorField p2_signed(const TensorField& v, int sigma2);
/// sym(∫₀¹t² x⊗v_tx dt + σ₃(∫₀¹t²(1-t) x⊗v_tx∧x dt)×∇).
TensorField p3_signed(const TensorField& v, int sigma3);
/// ∫₀¹(1-t) x⊥·V_tx·x⊥ dt.
TensorField p1_2d(const TensorField& v, const BasePoint& x0);
TensorField p1_2d(const TensorField& v);
/// sym(∫₀¹t u_tx⊗x dt + σ(∫₀¹t(t-1)(x⊥·u_tx)x dt)×∇).
TensorField p2_2d_signed(const TensorField& u, int sigma);

// Closed forms with resolved signs; throw PreconditionError if a slot is unresolved.

TensorField p1(const TensorField& e, const BasePoint& x0);
TensorField p1(const TensorField& e);
TensorField p2(const TensorField& v, const BasePoint& x0);
TensorField p2(const TensorField& v);
TensorField p3(const TensorField& v, const BasePoint& x0);
TensorField p3(const TensorField& v);
TensorField p2_2d(const TensorField& u, const BasePoint& x0);
TensorField p2_2d(const TensorField& u);

/// Koszul operators K_which^r with the printed degree-dependent coefficients.
/// The input must be homogeneous of degree r (the zero field is accepted).
TensorField koszul_r_signed(int which, int r, const TensorField& f, int sigma);
TensorField koszul_r(int which, int r, const TensorField& f);

/// Human-readable closed formula; σ shown as a value when given, else as a symbol.
std::string closed_form_text(OperatorId id, std::optional<int> sigma);

// Rigid motions ----------------------------------------------------------------

/// u = a + b∧(x - x0); in 2D b is the scalar rotation coefficient, b∧y := b·χy.
struct RigidMotion {
    TensorField a;
    TensorField b;
    BasePoint x0;

    TensorField field() const;
};

/// Reads off (a, b) at x0; throws PreconditionError if def u ≠ 0.
RigidMotion rigid_motion_extract(const TensorField& u, const BasePoint& x0);
RigidMotion rigid_motion_extract(const TensorField& u);
/// u minus the rigid motion matching u and skw∇u at x0.
TensorField rm_normalize(const TensorField& u, const BasePoint& x0);
TensorField rm_normalize(const TensorField& u);

// Potential recovery -----------------------------------------------------------

/// inc E in 3D; the scalar ∂₂²E₁₁ − 2∂₁∂₂E₁₂ + ∂₁²E₂₂ in 2D.
TensorField incompatibility(const TensorField& e);
/// u with def u = E; requires inc E = 0.
TensorField recover_displacement(const TensorField& e);
/// Symmetric W with inc W = V; requires div V = 0.
TensorField recover_inc_potential(const TensorField& v);
/// Airy stress function f with air f = V (2D); requires div V = 0.
TensorField recover_airy_potential(const TensorField& v);

/// Value of a field at a rational point, entry by entry.
std::vector<Rat> evaluate_at(const TensorField& f, std::span<const Rat> x);

}  // namespace kroner
