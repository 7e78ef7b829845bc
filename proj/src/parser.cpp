// Recursive-descent parser for the formula grammar declared in formula.hpp.

#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <vector>

#include "stlrob/formula.hpp"

namespace stlrob {

namespace {

enum class Tok {
    Ident, Number, LParen, RParen, LBracket, RBracket, Comma,
    Amp, Pipe, Bang, Plus, Minus, Star, Geq, End,
};

struct Token {
    Tok type;
    std::string text;
    double number = 0.0;
    std::size_t pos = 0;
};

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t pos = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), 0.0, pos});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::size_t j = i;
            while (j < n && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.'))
                ++j;
            if (j < n && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < n && (text[k] == '+' || text[k] == '-')) ++k;
                if (k < n && std::isdigit(static_cast<unsigned char>(text[k]))) {
                    ++k;
                    while (k < n && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
                    j = k;
                }
            }
            double value = 0.0;
            auto res = std::from_chars(text.data() + i, text.data() + j, value);
            if (res.ec != std::errc() || res.ptr != text.data() + j)
                throw ParseError("malformed number literal", pos);
            out.push_back({Tok::Number, std::string(text.substr(i, j - i)), value, pos});
            i = j;
            continue;
        }
        switch (c) {
            case '(': out.push_back({Tok::LParen, "(", 0.0, pos}); break;
            case ')': out.push_back({Tok::RParen, ")", 0.0, pos}); break;
            case '[': out.push_back({Tok::LBracket, "[", 0.0, pos}); break;
            case ']': out.push_back({Tok::RBracket, "]", 0.0, pos}); break;
            case ',': out.push_back({Tok::Comma, ",", 0.0, pos}); break;
            case '&': out.push_back({Tok::Amp, "&", 0.0, pos}); break;
            case '|': out.push_back({Tok::Pipe, "|", 0.0, pos}); break;
            case '!': out.push_back({Tok::Bang, "!", 0.0, pos}); break;
            case '+': out.push_back({Tok::Plus, "+", 0.0, pos}); break;
            case '-': out.push_back({Tok::Minus, "-", 0.0, pos}); break;
            case '*': out.push_back({Tok::Star, "*", 0.0, pos}); break;
            case '>':
                if (i + 1 < n && text[i + 1] == '=') {
                    out.push_back({Tok::Geq, ">=", 0.0, pos});
                    ++i;
                    break;
                }
                throw ParseError("expected '>=' (only non-strict comparison is supported)", pos);
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", pos);
        }
        ++i;
    }
    out.push_back({Tok::End, "", 0.0, n});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Formula run() {
        Formula f = parse_formula_chain();
        expect(Tok::End, "unexpected trailing input");
        return f.normalized();
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = idx_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& advance() { return toks_[idx_++]; }
    bool accept(Tok t) {
        if (peek().type == t) {
            ++idx_;
            return true;
        }
        return false;
    }
    const Token& expect(Tok t, const char* what) {
        if (peek().type != t) throw ParseError(what, peek().pos);
        return advance();
    }

    [[noreturn]] void fail(const char* what) const { throw ParseError(what, peek().pos); }

    std::pair<double, double> parse_interval() {
        std::size_t at = peek().pos;
        expect(Tok::LBracket, "expected '[' after temporal operator");
        double a = parse_signed_number();
        expect(Tok::Comma, "expected ',' in interval");
        double b = parse_signed_number();
        expect(Tok::RBracket, "expected ']' closing interval");
        if (a < 0.0 || a > b)
            throw ParseError("interval must satisfy 0 <= a <= b", at);
        return {a, b};
    }

    double parse_signed_number() {
        bool neg = accept(Tok::Minus);
        if (peek().type != Tok::Number) fail("expected a number");
        double v = advance().number;
        return neg ? -v : v;
    }

    // formula := term (('&'|'|') term)*, same operator throughout the chain.
    Formula parse_formula_chain() {
        std::vector<Formula> terms;
        terms.push_back(parse_until_term());
        if (peek().type != Tok::Amp && peek().type != Tok::Pipe) return std::move(terms.front());
        Tok op = peek().type;
        while (peek().type == Tok::Amp || peek().type == Tok::Pipe) {
            if (peek().type != op)
                fail("mixing '&' and '|' requires parentheses");
            advance();
            terms.push_back(parse_until_term());
        }
        return op == Tok::Amp ? Formula::conjunction(std::move(terms))
                              : Formula::disjunction(std::move(terms));
    }

    // term := unary ('U[a,b]' term)?   (right associative)
    Formula parse_until_term() {
        Formula lhs = parse_unary();
        if (peek().type == Tok::Ident && peek().text == "U" && peek(1).type == Tok::LBracket) {
            advance();
            auto [a, b] = parse_interval();
            Formula rhs = parse_until_term();
            return Formula::until(a, b, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Formula parse_unary() {
        const Token& t = peek();
        if (t.type == Tok::Bang) {
            advance();
            return Formula::negation(parse_unary());
        }
        if (t.type == Tok::Ident && (t.text == "G" || t.text == "F") &&
            peek(1).type == Tok::LBracket) {
            bool always = t.text == "G";
            advance();
            auto [a, b] = parse_interval();
            Formula child = parse_unary();
            return always ? Formula::always(a, b, std::move(child))
                          : Formula::eventually(a, b, std::move(child));
        }
        if (t.type == Tok::Ident && t.text == "true" && peek(1).type != Tok::LParen) {
            advance();
            return Formula::truth();
        }
        if (t.type == Tok::LParen) {
            // Ambiguous: "(x1 + 2) >= 1" is a predicate, "(p1 & p2)" a group.
            // Try the predicate reading first and fall back on failure.
            std::size_t save = idx_;
            try {
                return parse_predicate();
            } catch (const ParseError&) {
                idx_ = save;
            }
            advance();
            Formula f = parse_formula_chain();
            expect(Tok::RParen, "expected ')'");
            return f;
        }
        if (t.type == Tok::Ident || t.type == Tok::Number || t.type == Tok::Minus)
            return parse_predicate();
        fail("expected a formula");
    }

    // predicate := expr ('>=' expr)?, encoded as h := lhs - rhs (or h := lhs).
    Formula parse_predicate() {
        PredicateExpr lhs = parse_expr();
        if (accept(Tok::Geq)) {
            PredicateExpr rhs = parse_expr();
            return Formula::predicate(PredicateExpr::subtract(std::move(lhs), std::move(rhs)));
        }
        return Formula::predicate(std::move(lhs));
    }

    PredicateExpr parse_expr() {
        PredicateExpr acc = parse_product();
        while (peek().type == Tok::Plus || peek().type == Tok::Minus) {
            bool plus = advance().type == Tok::Plus;
            PredicateExpr rhs = parse_product();
            acc = plus ? PredicateExpr::add(std::move(acc), std::move(rhs))
                       : PredicateExpr::subtract(std::move(acc), std::move(rhs));
        }
        return acc;
    }

    PredicateExpr parse_product() {
        PredicateExpr acc = parse_primary();
        while (peek().type == Tok::Star) {
            std::size_t at = advance().pos;
            PredicateExpr rhs = parse_primary();
            if (acc.kind() == PredicateExpr::Kind::Constant)
                acc = PredicateExpr::scale(acc.value(), std::move(rhs));
            else if (rhs.kind() == PredicateExpr::Kind::Constant)
                acc = PredicateExpr::scale(rhs.value(), std::move(acc));
            else
                throw ParseError("multiplication requires a constant factor", at);
        }
        return acc;
    }

    PredicateExpr parse_primary() {
        const Token& t = peek();
        switch (t.type) {
            case Tok::Number:
                advance();
                return PredicateExpr::constant(t.number);
            case Tok::Minus: {
                advance();
                PredicateExpr inner = parse_primary();
                if (inner.kind() == PredicateExpr::Kind::Constant)
                    return PredicateExpr::constant(-inner.value());
                return PredicateExpr::scale(-1.0, std::move(inner));
            }
            case Tok::LParen: {
                advance();
                PredicateExpr e = parse_expr();
                expect(Tok::RParen, "expected ')' closing expression");
                return e;
            }
            case Tok::Ident: {
                if (peek(1).type == Tok::LParen) {
                    if (t.text != "norm")
                        throw ParseError("unknown function '" + t.text + "'", t.pos);
                    advance();
                    advance();
                    std::vector<PredicateExpr> parts;
                    if (peek().type == Tok::RParen)
                        throw ParseError("norm() needs at least one argument", peek().pos);
                    parts.push_back(parse_expr());
                    while (accept(Tok::Comma)) parts.push_back(parse_expr());
                    expect(Tok::RParen, "expected ')' closing norm");
                    return PredicateExpr::norm(std::move(parts));
                }
                advance();
                return PredicateExpr::channel(t.text);
            }
            default:
                fail("expected an expression");
        }
    }

    std::vector<Token> toks_;
    std::size_t idx_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).run(); }

}  // namespace stlrob
