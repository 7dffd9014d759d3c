#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "kroner/forms.hpp"

namespace kroner {

/// Anything a linear operator in the BGG diagrams acts on.
using Value = std::variant<Form, WForm, TensorField, WPairField>;

Value operator+(const Value& a, const Value& b);
Value operator-(const Value& a, const Value& b);
Value operator*(const Rat& c, const Value& a);
bool value_is_zero(const Value& v);
bool value_equal(const Value& a, const Value& b);
std::string value_to_string(const Value& v);

enum class SpaceKind { form, wform, field, wpair };

/// Signature of an operator argument or result.
///
/// `constraint` names a subspace (such as a Γ space) whose membership is
/// decided by `member`; two spaces are equal when their kind, shape data and
/// constraint name agree.
struct Space {
    SpaceKind kind = SpaceKind::field;
    int dim = 3;
    int k = 0;
    ValueSpace vs = ValueSpace::scalar;
    Shape shape = Shape::scalar;
    Symmetry sym = Symmetry::none;
    std::string constraint;
    std::shared_ptr<const std::function<bool(const Value&)>> member;

    static Space form(int dim, int k, ValueSpace vs);
    static Space wform(int dim, int k);
    static Space field(int dim, Shape shape, Symmetry sym = Symmetry::none);
    static Space wpair(int dim);
    Space subspace(std::string name, std::function<bool(const Value&)> pred) const;

    std::string label() const;
    Value zero() const;
    /// Kind/shape check plus the subspace predicate, if any.
    bool contains(const Value& v) const;
    bool operator==(const Space& o) const;
};

/// Immutable expression tree over linear operators.
///
/// Primitive nodes carry an evaluator; composite nodes (compose, add, negate,
/// scale, 2x2 block on W-valued forms) are evaluated structurally. Signatures
/// are checked when a node is built and again on every evaluation.
class LinOpExpr {
public:
    enum class Kind { primitive, identity, zero, compose, add, negate, scale, block };
    using Fn = std::function<Value(const Value&)>;

    static LinOpExpr primitive(std::string symbol, Space in, Space out, Fn fn, std::string formula = {});
    static LinOpExpr identity(Space s);
    static LinOpExpr zero(Space in, Space out);
    /// [[a, b],[c, d]] acting on (skew, vec) pairs of W-valued forms.
    static LinOpExpr block(LinOpExpr a, LinOpExpr b, LinOpExpr c, LinOpExpr d, Space in, Space out);

    Kind kind() const;
    const Space& in() const;
    const Space& out() const;
    const std::string& symbol() const;
    const std::vector<LinOpExpr>& children() const;

    Value operator()(const Value& v) const;

    /// Compact infix rendering, e.g. "Skw⁻¹ ∘ (𝔭 - T ∘ S₁⁻¹ ∘ d) ∘ J₁⁻¹".
    std::string render() const;
    /// Same tree with each primitive expanded to its closed formula where known.
    std::string render_formula() const;
    nlohmann::json to_json() const;

    /// Removes identity factors and folds nested negations/scales.
    LinOpExpr simplified() const;

    friend LinOpExpr compose(const LinOpExpr& outer, const LinOpExpr& inner);
    friend LinOpExpr operator+(const LinOpExpr& a, const LinOpExpr& b);
    friend LinOpExpr operator-(const LinOpExpr& a, const LinOpExpr& b);
    friend LinOpExpr operator*(const Rat& c, const LinOpExpr& a);
    LinOpExpr operator-() const;

private:
    struct Node;
    explicit LinOpExpr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::string render_impl(bool formula, int parent_prec) const;
    std::shared_ptr<const Node> n_;
};

LinOpExpr compose(const LinOpExpr& outer, const LinOpExpr& inner);
/// Right-to-left composition of a chain: compose_chain({A, B, C}) = A ∘ B ∘ C.
LinOpExpr compose_chain(const std::vector<LinOpExpr>& ops);

}  // namespace kroner
