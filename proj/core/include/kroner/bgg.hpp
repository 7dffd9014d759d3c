#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kroner/linop.hpp"

namespace kroner {

// Connecting maps --------------------------------------------------------------

/// S_k = d K - K d on vector-valued k-forms (k < dim); result is skew-valued.
Form s_op(const Form& w);
/// T_k = 𝔭 K - K 𝔭 on vector-valued k-forms (k ≥ 1).
Form t_op(const Form& w);

/// Linear map between form spaces that acts pointwise on coefficients with a
/// constant rational matrix.
class AlgebraicMap {
public:
    AlgebraicMap() = default;
    /// Builds the matrix of op by probing it with unit constant forms of `in`.
    static AlgebraicMap probe(const std::function<Form(const Form&)>& op, const Space& in, const Space& out);

    Form apply(const Form& w) const;
    /// Exact inverse by Gaussian elimination; throws PreconditionError if singular.
    AlgebraicMap inverse() const;
    /// op(p·e) == p·op(e) for every unit constant form e and every polynomial p in `multipliers`.
    bool is_algebraic(const std::function<Form(const Form&)>& op, const std::vector<Poly>& multipliers) const;

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Rat& at(std::size_t r, std::size_t c) const { return m_[r * cols_ + c]; }
    const Space& in() const { return in_; }
    const Space& out() const { return out_; }

private:
    Space in_, out_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> m_;
};

/// Matrix of S_k (cached per dim, k).
const AlgebraicMap& s_matrix(int dim, int k);
/// The invertible S: S₁ in 3D, S₀ in 2D.
const AlgebraicMap& s_invertible(int dim);
const AlgebraicMap& s_invertible_inverse(int dim);
/// Index k of the invertible S (1 in 3D, 0 in 2D).
int s_invertible_degree(int dim);

/// 𝒜_k(ω, μ) = (dω - S_k μ, dμ).
WForm a_op(const WForm& w);
/// ℬ_k(ω, μ) = (𝔭ω - T_k μ, 𝔭μ).
WForm b_op(const WForm& w);

// Primitive operator expressions -------------------------------------------

LinOpExpr op_d(int dim, int k, ValueSpace vs);
LinOpExpr op_p(int dim, int k, ValueSpace vs);
LinOpExpr op_kappa(int dim, int k, ValueSpace vs);
LinOpExpr op_K(int dim, int k);
LinOpExpr op_S(int dim, int k);
LinOpExpr op_T(int dim, int k);
LinOpExpr op_S_inv(int dim);
/// (𝒜_k, ℬ_k) as 2x2 block expressions; 𝒜_k is absent at k = dim, ℬ_k at k = 0.
struct ABBlocks {
    std::optional<LinOpExpr> a;
    std::optional<LinOpExpr> b;
};
ABBlocks ab_blocks(int dim, int k);

// Γ subspaces ----------------------------------------------------------------

/// Constrained W-valued pair. graph: μ = S⁻¹dω (Γ¹ in 3D, Γ⁰ in 2D);
/// second: ω = 0 (Γ² in 3D, Γ¹ in 2D).
struct GammaPair {
    enum class Kind { graph, second };
    WForm pair;
    Kind kind;

    GammaPair(WForm w, Kind k);
    static bool holds(const WForm& w, Kind k);
};

// Homotopy transfer ----------------------------------------------------------

/// A complex with a homotopy: spaces[i], d[i]: i → i+1, p[i]: i → i-1 (p[0] unused).
struct Row {
    std::string name;
    std::vector<Space> spaces;
    std::vector<LinOpExpr> d;
    std::vector<std::optional<LinOpExpr>> p;
    std::vector<std::vector<Value>> probes;
};

struct TransferStats {
    std::string step;
    std::size_t probes = 0;
    std::size_t checks = 0;
};

/// Pushes the homotopy of `top` through projections Π_i and lifts Π_i†.
///
/// Verifies Π∘Π† = id, d∘Π† = Π†∘d and Π∘d = d∘Π on the probe sets, then
/// returns the bottom row with p̃_i = Π_{i-1} ∘ p_i ∘ Π_i† and checks its
/// homotopy identity. Missing bottom differentials are induced as Π d Π†.
/// Throws CommutationError naming the failing probe.
Row homotopy_transfer(const Row& top, const std::string& name, const std::vector<LinOpExpr>& proj,
                      const std::vector<LinOpExpr>& lift, std::vector<std::optional<LinOpExpr>> d_bottom,
                      TransferStats* stats = nullptr);

/// Checks d p + p d = id (modulo ker d at level 0) on the probes of a row.
/// Returns the first failing probe description, or nullopt.
std::optional<std::string> check_homotopy(const Row& row);

// Derivation -----------------------------------------------------------------

struct Derivation {
    int dim = 3;
    std::vector<Row> rows;
    /// 𝒫₁..𝒫_{dim-1} (3D: P1,P2,P3; 2D: P1,P2), simplified expressions.
    std::vector<LinOpExpr> operators;
    std::vector<TransferStats> steps;
};

/// Runs the diagram chain top row → Γ row → component row → proxies → elasticity row.
Derivation derive_elasticity_poincare(int dim, int probe_degree = 3);
/// Cached default derivation (probe degree 3).
const Derivation& derived(int dim);

// Sign resolution ------------------------------------------------------------

/// A printed operator with sign slots on some of its terms.
struct SlottedOperator {
    std::string id;
    std::vector<std::string> slots;
    std::function<Value(const Value&, const std::vector<int>&)> eval;
    /// Probe basis of the input space.
    std::vector<Value> probes;
};

struct SlotResult {
    std::string slot;
    std::string op;
    int resolved_sign = 0;
    int probe_degree = 0;
    std::string status;  // "resolved", "no assignment", "ambiguous"
    std::vector<int> candidates;
};

struct SignReport {
    int dim = 3;
    int probe_degree = 0;
    std::string conventions;
    std::vector<SlotResult> slots;
    /// Per operator: structural diff of printed versus derived on the first failing probe, per sign choice.
    std::vector<std::pair<std::string, std::string>> diffs;
    std::size_t assignments_tested = 0;
    std::size_t assignments_matching = 0;

    bool resolved() const;
    std::optional<int> sign(const std::string& slot) const;
    nlohmann::json to_json() const;
};

/// The index and orientation conventions every sign refers to.
std::string convention_set();

/// Exhaustively enumerates all sign vectors and keeps those making every
/// printed operator equal to its derived counterpart on its probes.
SignReport resolve_signs(int dim, int probe_degree, const std::vector<LinOpExpr>& derived_ops,
                         const std::vector<SlottedOperator>& printed);

// Probe bases ----------------------------------------------------------------

/// Monomial W-valued k-forms of polynomial degree ≤ max_degree.
std::vector<Value> monomial_wforms(int dim, int k, int max_degree);
std::vector<Form> monomial_forms(int dim, int k, ValueSpace vs, int max_degree, int min_degree = 0);
/// Monomial fields: scalar, vector, symmetric (m·(e_i⊗e_j + e_j⊗e_i) style) or general matrices.
std::vector<TensorField> monomial_fields(int dim, Shape shape, Symmetry sym, int max_degree, int min_degree = 0);

}  // namespace kroner
