#pragma once

#include <optional>
#include <string>

#include "kroner/tensor_field.hpp"

namespace kroner {

// Index conventions, fixed here for the whole library:
//   (∇u)_ij   = ∂_j u_i
//   (∇×M)_ij  = ε_iab ∂_a M_bj        column-wise curl
//   (M×∇)_ij  = ε_jab ∂_a M_ib        row-wise curl
//   (div M)_i = ∂_j M_ij
//   inc E     = (∇×E)×∇
//   2D: f×∇ = (∂₂f, -∂₁f), applied row-wise to vectors; air u = (u×∇)×∇

enum class DiffOpTag { grad, curl_vec, div_vec, curl_cols, curl_rows, div_rows, def, inc, air };

std::string to_string(DiffOpTag t);
std::optional<DiffOpTag> parse_diff_op(const std::string& name);

/// Gradient of a scalar (vector result) or Jacobian of a vector (matrix result).
TensorField grad(const TensorField& f);
TensorField curl_vec(const TensorField& u);
TensorField div_vec(const TensorField& u);
TensorField curl_cols(const TensorField& m);
TensorField curl_rows(const TensorField& m);
TensorField div_rows(const TensorField& m);

/// 2D scalar curl f ↦ (∂₂f, -∂₁f).
TensorField scurl(const TensorField& f);
/// 2D scalar curl applied to each component of a vector, giving one row per component.
TensorField scurl_rows(const TensorField& u);

TensorField def_op(const TensorField& u);
TensorField inc_op(const TensorField& e);
TensorField air_op(const TensorField& u);
/// ∇×E.
TensorField frank_tensor(const TensorField& e);

TensorField apply(DiffOpTag tag, const TensorField& f);

}  // namespace kroner
