#include "stlrob/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

namespace stlrob {

namespace {

std::string double_to_string(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

void validate_interval(double a, double b) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw std::invalid_argument("temporal interval bounds must be finite");
    if (a < 0.0 || a > b)
        throw std::invalid_argument("temporal interval must satisfy 0 <= a <= b, got [" +
                                    double_to_string(a) + "," + double_to_string(b) + "]");
}

}  // namespace

// ── PredicateExpr ───────────────────────────────────────────────────────────

PredicateExpr PredicateExpr::constant(double value) {
    PredicateExpr e;
    e.kind_ = Kind::Constant;
    e.value_ = value;
    return e;
}

PredicateExpr PredicateExpr::channel(std::string name) {
    if (name.empty()) throw std::invalid_argument("channel name must not be empty");
    PredicateExpr e;
    e.kind_ = Kind::Channel;
    e.name_ = std::move(name);
    return e;
}

PredicateExpr PredicateExpr::add(PredicateExpr lhs, PredicateExpr rhs) {
    PredicateExpr e;
    e.kind_ = Kind::Add;
    e.children_.push_back(std::move(lhs));
    e.children_.push_back(std::move(rhs));
    return e;
}

PredicateExpr PredicateExpr::subtract(PredicateExpr lhs, PredicateExpr rhs) {
    PredicateExpr e;
    e.kind_ = Kind::Subtract;
    e.children_.push_back(std::move(lhs));
    e.children_.push_back(std::move(rhs));
    return e;
}

PredicateExpr PredicateExpr::scale(double factor, PredicateExpr expr) {
    PredicateExpr e;
    e.kind_ = Kind::Scale;
    e.value_ = factor;
    e.children_.push_back(std::move(expr));
    return e;
}

PredicateExpr PredicateExpr::norm(std::vector<PredicateExpr> parts) {
    if (parts.empty()) throw std::invalid_argument("norm() of an empty vector");
    PredicateExpr e;
    e.kind_ = Kind::Norm;
    e.children_ = std::move(parts);
    return e;
}

void PredicateExpr::collect_channels(std::vector<std::string>& out) const {
    if (kind_ == Kind::Channel) out.push_back(name_);
    for (const PredicateExpr& c : children_) c.collect_channels(out);
}

std::string PredicateExpr::to_string() const {
    switch (kind_) {
        case Kind::Constant: return double_to_string(value_);
        case Kind::Channel: return name_;
        case Kind::Add:
            return "(" + children_[0].to_string() + " + " + children_[1].to_string() + ")";
        case Kind::Subtract:
            return "(" + children_[0].to_string() + " - " + children_[1].to_string() + ")";
        case Kind::Scale:
            return "(" + double_to_string(value_) + " * " + children_[0].to_string() + ")";
        case Kind::Norm: {
            std::string s = "norm(";
            for (std::size_t i = 0; i < children_.size(); ++i) {
                if (i) s += ", ";
                s += children_[i].to_string();
            }
            return s + ")";
        }
    }
    return {};
}

bool PredicateExpr::operator==(const PredicateExpr& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
        case Kind::Constant: return value_ == other.value_;
        case Kind::Channel: return name_ == other.name_;
        case Kind::Scale:
            if (value_ != other.value_) return false;
            break;
        default: break;
    }
    return children_ == other.children_;
}

// ── Formula ─────────────────────────────────────────────────────────────────

Formula Formula::truth() {
    Formula f;
    f.kind_ = Kind::True;
    return f;
}

Formula Formula::predicate(PredicateExpr expr) {
    Formula f;
    f.kind_ = Kind::Predicate;
    f.pred_ = std::move(expr);
    return f;
}

Formula Formula::negation(Formula child) {
    Formula f;
    f.kind_ = Kind::Not;
    f.children_.push_back(std::move(child));
    return f;
}

Formula Formula::conjunction(std::vector<Formula> fs) {
    if (fs.size() < 2) throw std::invalid_argument("conjunction needs at least two operands");
    Formula f;
    f.kind_ = Kind::And;
    f.children_ = std::move(fs);
    return f;
}

Formula Formula::disjunction(std::vector<Formula> fs) {
    if (fs.size() < 2) throw std::invalid_argument("disjunction needs at least two operands");
    Formula f;
    f.kind_ = Kind::Or;
    f.children_ = std::move(fs);
    return f;
}

Formula Formula::eventually(double a, double b, Formula child) {
    validate_interval(a, b);
    Formula f;
    f.kind_ = Kind::Eventually;
    f.lower_ = a;
    f.upper_ = b;
    f.children_.push_back(std::move(child));
    return f;
}

Formula Formula::always(double a, double b, Formula child) {
    validate_interval(a, b);
    Formula f;
    f.kind_ = Kind::Always;
    f.lower_ = a;
    f.upper_ = b;
    f.children_.push_back(std::move(child));
    return f;
}

Formula Formula::until(double a, double b, Formula lhs, Formula rhs) {
    validate_interval(a, b);
    Formula f;
    f.kind_ = Kind::Until;
    f.lower_ = a;
    f.upper_ = b;
    f.children_.push_back(std::move(lhs));
    f.children_.push_back(std::move(rhs));
    return f;
}

Formula Formula::normalized() const {
    Formula f = *this;
    std::vector<Formula> flat;
    for (Formula& c : f.children_) {
        Formula n = c.normalized();
        if ((kind_ == Kind::And || kind_ == Kind::Or) && n.kind_ == kind_) {
            for (Formula& g : n.children_) flat.push_back(std::move(g));
        } else {
            flat.push_back(std::move(n));
        }
    }
    f.children_ = std::move(flat);
    return f;
}

double Formula::horizon() const {
    switch (kind_) {
        case Kind::True:
        case Kind::Predicate: return 0.0;
        case Kind::Not: return children_[0].horizon();
        case Kind::And:
        case Kind::Or: {
            double h = 0.0;
            for (const Formula& c : children_) h = std::max(h, c.horizon());
            return h;
        }
        case Kind::Eventually:
        case Kind::Always: return upper_ + children_[0].horizon();
        case Kind::Until:
            return upper_ + std::max(children_[0].horizon(), children_[1].horizon());
    }
    return 0.0;
}

std::size_t Formula::node_count() const {
    std::size_t n = 1;
    for (const Formula& c : children_) n += c.node_count();
    return n;
}

std::string Formula::to_string() const {
    switch (kind_) {
        case Kind::True: return "true";
        case Kind::Predicate: return pred_.to_string();
        case Kind::Not: return "!(" + children_[0].to_string() + ")";
        case Kind::And:
        case Kind::Or: {
            const char* op = kind_ == Kind::And ? " & " : " | ";
            std::string s = "(";
            for (std::size_t i = 0; i < children_.size(); ++i) {
                if (i) s += op;
                s += children_[i].to_string();
            }
            return s + ")";
        }
        case Kind::Eventually:
        case Kind::Always: {
            const char* op = kind_ == Kind::Eventually ? "F[" : "G[";
            return op + double_to_string(lower_) + "," + double_to_string(upper_) + "](" +
                   children_[0].to_string() + ")";
        }
        case Kind::Until:
            return "(" + children_[0].to_string() + " U[" + double_to_string(lower_) + "," +
                   double_to_string(upper_) + "] " + children_[1].to_string() + ")";
    }
    return {};
}

std::string Formula::label() const {
    switch (kind_) {
        case Kind::True: return "true";
        case Kind::Predicate: return pred_.to_string();
        case Kind::Not: return "!";
        case Kind::And: return "&";
        case Kind::Or: return "|";
        case Kind::Eventually:
            return "F[" + double_to_string(lower_) + "," + double_to_string(upper_) + "]";
        case Kind::Always:
            return "G[" + double_to_string(lower_) + "," + double_to_string(upper_) + "]";
        case Kind::Until:
            return "U[" + double_to_string(lower_) + "," + double_to_string(upper_) + "]";
    }
    return {};
}

bool Formula::operator==(const Formula& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
        case Kind::Predicate:
            if (!(pred_ == other.pred_)) return false;
            break;
        case Kind::Eventually:
        case Kind::Always:
        case Kind::Until:
            if (lower_ != other.lower_ || upper_ != other.upper_) return false;
            break;
        default: break;
    }
    return children_ == other.children_;
}

std::string format_formula(const Formula& f) { return f.to_string(); }

double formula_horizon(const Formula& f) { return f.horizon(); }

}  // namespace stlrob
