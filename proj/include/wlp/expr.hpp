#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wlp/errors.hpp"
#include "wlp/lattice.hpp"
#include "wlp/numeric.hpp"

namespace wlp {

// Subset-enumeration cap: every distribution formula below walks all 2^n
// vertex masks, so exceeding the cap is an error rather than a silent stall.
inline constexpr int kDefaultArityCap = 20;

// ── WlpExpr ─────────────────────────────────────────────────────────────────
// Expression tree for weighted lattice polynomials: variables x1..xn and
// constants combined by min (Meet) and max (Join). Meet/Join nodes are n-ary
// and flattened on construction, which gives a canonical printed form.
// Immutable after construction; all operations on it are pure.
class WlpExpr {
public:
    enum class Kind { Var, Const, Meet, Join };

    static WlpExpr var(int index) {
        if (index < 1)
            throw std::invalid_argument("variable index must be >= 1, got " +
                                        std::to_string(index));
        WlpExpr e(Kind::Var);
        e.var_index_ = index;
        e.arity_ = index;
        return e;
    }

    static WlpExpr constant(double value) {
        if (!std::isfinite(value))
            throw std::invalid_argument("constants must be finite");
        WlpExpr e(Kind::Const);
        e.value_ = value;
        return e;
    }

    static WlpExpr meet(std::vector<WlpExpr> children) {
        return combine(Kind::Meet, std::move(children));
    }

    static WlpExpr join(std::vector<WlpExpr> children) {
        return combine(Kind::Join, std::move(children));
    }

    Kind kind() const { return kind_; }
    int var_index() const { return var_index_; }
    double const_value() const { return value_; }
    const std::vector<WlpExpr>& children() const { return children_; }

    // Highest variable index referenced anywhere in the tree; 0 for an
    // all-constant expression.
    int arity() const { return arity_; }

private:
    explicit WlpExpr(Kind k) : kind_(k) {}

    static WlpExpr combine(Kind k, std::vector<WlpExpr> children) {
        if (children.empty())
            throw std::invalid_argument("meet/join needs at least one operand");
        if (children.size() == 1) return std::move(children.front());
        WlpExpr e(k);
        for (auto& c : children) {
            if (c.kind_ == k) {
                // associative, flatten nested nodes of the same kind
                for (auto& gc : c.children_) e.children_.push_back(std::move(gc));
            } else {
                e.children_.push_back(std::move(c));
            }
        }
        for (const auto& c : e.children_) e.arity_ = std::max(e.arity_, c.arity_);
        return e;
    }

    Kind kind_;
    int var_index_ = 0;
    double value_ = 0.0;
    int arity_ = 0;
    std::vector<WlpExpr> children_;
};

namespace detail {

// Unchecked recursive min/max evaluation (callers validate the point once).
inline double eval(const WlpExpr& e, std::span<const double> x) {
    switch (e.kind()) {
        case WlpExpr::Kind::Var:
            return x[static_cast<std::size_t>(e.var_index() - 1)];
        case WlpExpr::Kind::Const:
            return e.const_value();
        case WlpExpr::Kind::Meet: {
            double v = kInf;
            for (const auto& c : e.children()) v = std::min(v, eval(c, x));
            return v;
        }
        case WlpExpr::Kind::Join: {
            double v = -kInf;
            for (const auto& c : e.children()) v = std::max(v, eval(c, x));
            return v;
        }
    }
    return 0.0;  // unreachable
}

inline void check_constants_in(const WlpExpr& e, const LatticeInterval& lattice) {
    switch (e.kind()) {
        case WlpExpr::Kind::Const:
            if (!lattice.contains(e.const_value()))
                throw std::invalid_argument("constant " + double_to_string(e.const_value()) +
                                            " lies outside the lattice interval");
            return;
        case WlpExpr::Kind::Meet:
        case WlpExpr::Kind::Join:
            for (const auto& c : e.children()) check_constants_in(c, lattice);
            return;
        default:
            return;
    }
}

}  // namespace detail

// ── evaluate ────────────────────────────────────────────────────────────────
// Recursive min/max evaluation of the polynomial at a point of [a,b]^n.
inline double evaluate(const WlpExpr& e, std::span<const double> x,
                       const LatticeInterval& lattice) {
    if (static_cast<int>(x.size()) < e.arity())
        throw std::invalid_argument("point has " + std::to_string(x.size()) +
                                    " coordinates, expression references x" +
                                    std::to_string(e.arity()));
    for (double xi : x)
        if (std::isnan(xi) || !lattice.contains(xi))
            throw std::invalid_argument("evaluation point lies outside the lattice interval");
    return detail::eval(e, x);
}

// ── VertexTable ─────────────────────────────────────────────────────────────
// The 2^n vertex values alpha[S] = p(e_S), where e_S has coordinate b for
// i in S and a otherwise. This is the unique nondecreasing family of
// disjunctive coefficients; the conjunctive family is its complement-indexed
// mirror beta(S) = alpha([n] \ S) and is not stored separately.
struct VertexTable {
    int n;
    LatticeInterval lattice;
    std::vector<double> alpha;  // size 2^n, indexed by subset bitmask

    std::uint32_t full_mask() const { return (n == 32) ? ~0u : ((1u << n) - 1u); }
    double beta(std::uint32_t mask) const { return alpha[full_mask() ^ mask]; }

    // True when the table takes only the endpoint values {a, b} and
    // alpha(empty) = a, i.e. p is an ordinary (unweighted) lattice polynomial.
    bool is_lattice_polynomial() const {
        if (alpha.front() != lattice.a) return false;
        for (double v : alpha)
            if (v != lattice.a && v != lattice.b) return false;
        return true;
    }
};

// Evaluates p at every characteristic vector e_S. `ground_set_size` forces a
// table over a larger ground set than the expression references (useful when
// comparing tables of pinned expressions); -1 means use arity(e).
inline VertexTable vertex_table(const WlpExpr& e, const LatticeInterval& lattice,
                                int ground_set_size = -1, int arity_cap = kDefaultArityCap) {
    detail::check_constants_in(e, lattice);
    const int n = ground_set_size < 0 ? e.arity() : ground_set_size;
    if (n < e.arity())
        throw std::invalid_argument("ground set smaller than expression arity");
    if (n > arity_cap)
        throw std::invalid_argument("arity " + std::to_string(n) + " exceeds cap " +
                                    std::to_string(arity_cap) +
                                    " (vertex enumeration is 2^n)");
    VertexTable t{n, lattice, {}};
    t.alpha.resize(std::size_t{1} << n);
    std::vector<double> point(static_cast<std::size_t>(n), lattice.a);
    for (std::uint32_t mask = 0; mask < t.alpha.size(); ++mask) {
        for (int i = 0; i < n; ++i)
            point[static_cast<std::size_t>(i)] = (mask >> i) & 1u ? lattice.b : lattice.a;
        t.alpha[mask] = detail::eval(e, point);
    }
    return t;
}

// ── pin ─────────────────────────────────────────────────────────────────────
// Substitutes constants for the given variables. The result is a polynomial
// in the remaining variables (indices are kept, not renumbered); pinning
// every variable yields a constant expression.
inline WlpExpr pin(const WlpExpr& e, const std::map<int, double>& assignments,
                   const LatticeInterval& lattice) {
    for (const auto& [index, value] : assignments) {
        if (index < 1 || index > e.arity())
            throw std::invalid_argument("pinned index x" + std::to_string(index) +
                                        " is out of range");
        if (!lattice.contains(value) || !std::isfinite(value))
            throw std::invalid_argument("pinned constant for x" + std::to_string(index) +
                                        " lies outside the lattice interval");
    }
    struct Subst {
        const std::map<int, double>& map;
        WlpExpr apply(const WlpExpr& node) const {
            switch (node.kind()) {
                case WlpExpr::Kind::Var: {
                    auto it = map.find(node.var_index());
                    return it == map.end() ? node : WlpExpr::constant(it->second);
                }
                case WlpExpr::Kind::Const:
                    return node;
                case WlpExpr::Kind::Meet:
                case WlpExpr::Kind::Join: {
                    std::vector<WlpExpr> kids;
                    kids.reserve(node.children().size());
                    for (const auto& c : node.children()) kids.push_back(apply(c));
                    return node.kind() == WlpExpr::Kind::Meet ? WlpExpr::meet(std::move(kids))
                                                              : WlpExpr::join(std::move(kids));
                }
            }
            return node;  // unreachable
        }
    };
    return Subst{assignments}.apply(e);
}

// ── median_decompose ────────────────────────────────────────────────────────
// Splits off variable k: returns (p with x_k frozen at the lattice bottom,
// x_k itself, p with x_k frozen at the top), all evaluated at x. The median
// of the triple recovers p(x), and lower <= upper by monotonicity.
struct MedianSplit {
    double lower;   // p_k^a(x)
    double pivot;   // x_k
    double upper;   // p_k^b(x)

    double median() const { return std::min(std::max(pivot, lower), upper); }
};

inline MedianSplit median_decompose(const WlpExpr& e, int k, std::span<const double> x,
                                    const LatticeInterval& lattice) {
    if (k < 1 || k > e.arity())
        throw std::invalid_argument("median split index out of range");
    if (static_cast<int>(x.size()) < e.arity())
        throw std::invalid_argument("point has too few coordinates");
    for (double xi : x)
        if (std::isnan(xi) || !lattice.contains(xi))
            throw std::invalid_argument("evaluation point lies outside the lattice interval");
    std::vector<double> pt(x.begin(), x.end());
    const auto ki = static_cast<std::size_t>(k - 1);
    pt[ki] = lattice.a;
    const double lower = detail::eval(e, pt);
    pt[ki] = lattice.b;
    const double upper = detail::eval(e, pt);
    return {lower, x[ki], upper};
}

// ── parser ──────────────────────────────────────────────────────────────────
// Grammar:   expr := term { "|" term }
//            term := atom { "&" atom }
//            atom := "min(" expr {"," expr} ")" | "max(" expr {"," expr} ")"
//                  | var | number | "(" expr ")"
//            var  := "x" positive-integer
// "&" is min and binds tighter than "|" (max); whitespace is insignificant.
namespace detail {

class Parser {
public:
    Parser(std::string_view text, const LatticeInterval& lattice)
        : text_(text), lattice_(lattice) {}

    WlpExpr parse() {
        WlpExpr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return e;
    }

private:
    WlpExpr parse_expr() {
        std::vector<WlpExpr> terms;
        terms.push_back(parse_term());
        while (peek() == '|') {
            ++pos_;
            terms.push_back(parse_term());
        }
        return WlpExpr::join(std::move(terms));
    }

    WlpExpr parse_term() {
        std::vector<WlpExpr> atoms;
        atoms.push_back(parse_atom());
        while (peek() == '&') {
            ++pos_;
            atoms.push_back(parse_atom());
        }
        return WlpExpr::meet(std::move(atoms));
    }

    WlpExpr parse_atom() {
        skip_ws();
        if (depth_ > 2000) fail("expression nests too deeply");
        if (pos_ >= text_.size()) fail("unexpected end of input, expected an operand");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ++depth_;
            WlpExpr e = parse_expr();
            --depth_;
            expect(')');
            return e;
        }
        if (consume_keyword("min")) return parse_call(WlpExpr::Kind::Meet);
        if (consume_keyword("max")) return parse_call(WlpExpr::Kind::Join);
        if (c == 'x') return parse_var();
        if ((c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+') return parse_number();
        fail(std::string("unexpected character '") + c + "'");
    }

    WlpExpr parse_call(WlpExpr::Kind kind) {
        expect('(');
        ++depth_;
        std::vector<WlpExpr> args;
        args.push_back(parse_expr());
        skip_ws();
        while (peek() == ',') {
            ++pos_;
            args.push_back(parse_expr());
            skip_ws();
        }
        --depth_;
        expect(')');
        return kind == WlpExpr::Kind::Meet ? WlpExpr::meet(std::move(args))
                                           : WlpExpr::join(std::move(args));
    }

    WlpExpr parse_var() {
        const std::size_t start = pos_;
        ++pos_;  // 'x'
        std::size_t digits = 0;
        long index = 0;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
            index = index * 10 + (text_[pos_] - '0');
            if (index > 1'000'000) fail_at(start, "variable index too large");
            ++pos_;
            ++digits;
        }
        if (digits == 0) fail_at(start, "expected a variable index after 'x'");
        if (index == 0) fail_at(start, "variable indices start at x1, got x0");
        return WlpExpr::var(static_cast<int>(index));
    }

    WlpExpr parse_number() {
        const std::size_t start = pos_;
        double value = 0.0;
        auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (res.ec != std::errc{}) fail_at(start, "malformed number");
        pos_ = static_cast<std::size_t>(res.ptr - text_.data());
        if (!lattice_.contains(value))
            fail_at(start, "constant " + double_to_string(value) +
                               " lies outside the lattice interval [" +
                               double_to_string(lattice_.a) + ", " +
                               double_to_string(lattice_.b) + "]");
        return WlpExpr::constant(value);
    }

    bool consume_keyword(std::string_view kw) {
        skip_ws();
        if (text_.substr(pos_).substr(0, kw.size()) != kw) return false;
        // keyword must not run into an identifier tail ("minx" is not "min x")
        const std::size_t after = pos_ + kw.size();
        if (after < text_.size()) {
            const char c = text_[after];
            if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))
                return false;
        }
        pos_ = after;
        return true;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                text_[pos_] == '\r'))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& message) { fail_at(pos_, message); }

    [[noreturn]] void fail_at(std::size_t at, const std::string& message) {
        throw parse_error(message + " at position " + std::to_string(at), at);
    }

    std::string_view text_;
    LatticeInterval lattice_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace detail

inline WlpExpr parse(std::string_view text, const LatticeInterval& lattice) {
    return detail::Parser(text, lattice).parse();
}

// Canonical printer: always the function form, e.g. "max(min(x1,x2),x3)".
inline std::string to_string(const WlpExpr& e) {
    switch (e.kind()) {
        case WlpExpr::Kind::Var:
            return "x" + std::to_string(e.var_index());
        case WlpExpr::Kind::Const:
            return double_to_string(e.const_value());
        case WlpExpr::Kind::Meet:
        case WlpExpr::Kind::Join: {
            std::string out = e.kind() == WlpExpr::Kind::Meet ? "min(" : "max(";
            bool first = true;
            for (const auto& c : e.children()) {
                if (!first) out += ',';
                out += to_string(c);
                first = false;
            }
            out += ')';
            return out;
        }
    }
    return {};
}

}  // namespace wlp
