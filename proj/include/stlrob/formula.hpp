// formula.hpp — STL formula grammar: predicates, Boolean connectives and
// bounded temporal operators.
//
// Formulas are immutable value trees.  Conjunction and disjunction are n-ary
// nodes: the conjunction aggregator is defined over M operands and is not
// associative, so (a & b) & c and a & b & c denote different evaluations.
// normalized() flattens same-operator chains into one n-ary node; the parser
// applies it before returning.

#ifndef STLROB_FORMULA_HPP
#define STLROB_FORMULA_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stlrob {

class FormulaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax error with the offset into the input text where it was detected.
class ParseError : public FormulaError {
public:
    ParseError(const std::string& msg, std::size_t position)
        : FormulaError(msg + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// ── PredicateExpr ───────────────────────────────────────────────────────────
// Arithmetic expression h over named signal channels.  A predicate holds iff
// h(x) >= 0.  Node kinds: real constant, channel reference, sum, difference,
// multiplication by a constant, and the Euclidean norm of a list of
// sub-expressions.

class PredicateExpr {
public:
    enum class Kind { Constant, Channel, Add, Subtract, Scale, Norm };

    static PredicateExpr constant(double value);
    static PredicateExpr channel(std::string name);
    static PredicateExpr add(PredicateExpr lhs, PredicateExpr rhs);
    static PredicateExpr subtract(PredicateExpr lhs, PredicateExpr rhs);
    static PredicateExpr scale(double factor, PredicateExpr expr);
    // Throws std::invalid_argument when parts is empty.
    static PredicateExpr norm(std::vector<PredicateExpr> parts);

    Kind kind() const noexcept { return kind_; }
    double value() const noexcept { return value_; }  // Constant value / Scale factor
    const std::string& channel_name() const noexcept { return name_; }
    const std::vector<PredicateExpr>& children() const noexcept { return children_; }

    /// Appends every referenced channel name (with repetition) to out.
    void collect_channels(std::vector<std::string>& out) const;

    std::string to_string() const;
    bool operator==(const PredicateExpr& other) const;

private:
    PredicateExpr() = default;

    Kind kind_ = Kind::Constant;
    double value_ = 0.0;
    std::string name_;
    std::vector<PredicateExpr> children_;
};

// ── Formula ─────────────────────────────────────────────────────────────────

class Formula {
public:
    enum class Kind { True, Predicate, Not, And, Or, Eventually, Always, Until };

    static Formula truth();
    static Formula predicate(PredicateExpr expr);
    static Formula negation(Formula f);
    // And/Or take two or more operands; throws std::invalid_argument otherwise.
    static Formula conjunction(std::vector<Formula> fs);
    static Formula disjunction(std::vector<Formula> fs);
    // Intervals must satisfy 0 <= a <= b < inf; throws std::invalid_argument.
    static Formula eventually(double a, double b, Formula f);
    static Formula always(double a, double b, Formula f);
    static Formula until(double a, double b, Formula lhs, Formula rhs);

    Kind kind() const noexcept { return kind_; }
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    const PredicateExpr& pred() const { return pred_; }
    const std::vector<Formula>& children() const noexcept { return children_; }

    /// Flattens And directly under And and Or directly under Or, recursively.
    /// Idempotent.
    Formula normalized() const;

    /// Smallest H such that evaluation at time t reads the trace only on
    /// [t, t+H].
    double horizon() const;

    std::size_t node_count() const;
    std::string to_string() const;
    bool operator==(const Formula& other) const;

    /// One-line description of the node itself (operator or predicate text).
    std::string label() const;

private:
    Formula() = default;

    Kind kind_ = Kind::True;
    double lower_ = 0.0;
    double upper_ = 0.0;
    PredicateExpr pred_ = PredicateExpr::constant(0.0);
    std::vector<Formula> children_;
};

/// Parses the concrete syntax, returning a normalized formula.
///
///   formula   := term (('&' | '|') term)*          -- no mixing without parens
///   term      := unary ('U[' a ',' b ']' term)?    -- until, right associative
///   unary     := '!' unary | 'G[a,b]' unary | 'F[a,b]' unary
///              | '(' formula ')' | 'true' | predicate
///   predicate := expr ('>=' expr)?                 -- ">= 0" implied
///   expr      := + - , constant * expr, norm(e1, e2, ...), channels, literals
///
/// Throws ParseError (syntax, unknown function, bad interval).
Formula parse_formula(std::string_view text);

/// Canonical text form; parse_formula(format_formula(f)) is structurally
/// equal to f for normalized f.
std::string format_formula(const Formula& f);

double formula_horizon(const Formula& f);

/// Depth-first preorder visit; fn(depth, node).
template <typename Fn>
void preorder(const Formula& f, Fn&& fn, int depth = 0) {
    fn(depth, f);
    for (const Formula& c : f.children()) preorder(c, fn, depth + 1);
}

}  // namespace stlrob

#endif  // STLROB_FORMULA_HPP
