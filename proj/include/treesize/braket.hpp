#pragma once

/**
 * @file
 * Bra-ket formulas <-> trees.
 *
 * Grammar (whitespace ignored):
 *
 *   expr    := ['+'|'-'] term (('+'|'-') term)*
 *   term    := factor factor*
 *   factor  := coeff? primary ('/' catom)* ('@[' int (',' int)* ']')?
 *   primary := '|' [01]+ '>' | '(' expr ')'
 *   coeff   := cterm | '(' cexpr ')'
 *   cexpr   := ['+'|'-'] cterm (('+'|'-') cterm)*
 *   cterm   := catom (('*'|'/') catom)*
 *   catom   := number ['i'] | 'i' | 'sqrt' number
 *
 * A parenthesized group is a coefficient iff no '|' occurs before its
 * matching ')'. Factors of a term take the qubits of their context in
 * order; "@[i,j]" pins a factor to explicit qubits, which is how crossing
 * products such as (..)@[1,3](..)@[2,4] are written.
 */

#include <charconv>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "tree.hpp"

namespace treesize {

namespace detail {

struct BkNode {
    enum class Kind { Ket, Sum, Prod };
    Kind kind = Kind::Ket;
    std::string bits;
    Complex coeff = 1.0;
    std::vector<BkNode> kids;
    std::vector<int> annot;
    std::size_t pos = 0;
};

class BraketParser {
  public:
    explicit BraketParser(std::string_view s) : s_(s) {}

    BkNode parse() {
        BkNode e = expr();
        skip();
        if (i_ != s_.size()) {
            fail("unexpected character");
        }
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string &what) const { throw SyntaxError(what, i_); }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])) != 0) {
            ++i_;
        }
    }
    char peek() {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    void expect(char c) {
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++i_;
    }
    bool starts_with(std::string_view w) {
        skip();
        return s_.substr(i_, w.size()) == w;
    }

    /// True if the '(' at i_ opens a coefficient group.
    bool paren_is_coeff() const {
        int depth = 0;
        for (std::size_t k = i_; k < s_.size(); ++k) {
            const char c = s_[k];
            if (c == '|') {
                return false;
            }
            if (c == '(') {
                ++depth;
            } else if (c == ')' && --depth == 0) {
                return true;
            }
        }
        return true;
    }

    bool at_factor_start() {
        const char c = peek();
        return c == '|' || c == '(' || std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.' ||
               c == 'i' || starts_with("sqrt");
    }

    BkNode expr() {
        BkNode sum;
        sum.kind = BkNode::Kind::Sum;
        sum.pos = i_;
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') {
            sign = s_[i_] == '-' ? -1.0 : 1.0;
            ++i_;
        }
        for (;;) {
            BkNode t = term();
            t.coeff *= sign;
            sum.kids.push_back(std::move(t));
            const char c = peek();
            if (c != '+' && c != '-') {
                break;
            }
            sign = c == '-' ? -1.0 : 1.0;
            ++i_;
        }
        if (sum.kids.size() == 1) {
            return std::move(sum.kids.front());
        }
        return sum;
    }

    BkNode term() {
        BkNode prod;
        prod.kind = BkNode::Kind::Prod;
        prod.pos = i_;
        if (!at_factor_start()) {
            fail("expected a ket, a coefficient or '('");
        }
        while (at_factor_start()) {
            prod.kids.push_back(factor());
        }
        if (prod.kids.size() == 1) {
            return std::move(prod.kids.front());
        }
        return prod;
    }

    BkNode factor() {
        Complex c = 1.0;
        skip();
        const std::size_t start = i_;
        if (peek() == '(' && paren_is_coeff()) {
            ++i_;
            c = cexpr();
            expect(')');
        } else if (peek() != '|' && peek() != '(') {
            c = cterm();
        }
        BkNode p = primary();
        p.pos = start;
        p.coeff *= c;
        while (peek() == '/') {
            ++i_;
            p.coeff /= catom();
        }
        if (starts_with("@[")) {
            i_ += 2;
            for (;;) {
                p.annot.push_back(integer());
                if (peek() == ',') {
                    ++i_;
                    continue;
                }
                expect(']');
                break;
            }
        }
        return p;
    }

    BkNode primary() {
        const char c = peek();
        if (c == '|') {
            ++i_;
            BkNode k;
            k.kind = BkNode::Kind::Ket;
            k.pos = i_;
            while (i_ < s_.size() && (s_[i_] == '0' || s_[i_] == '1')) {
                k.bits.push_back(s_[i_++]);
            }
            if (k.bits.empty()) {
                fail("empty ket");
            }
            expect('>');
            return k;
        }
        if (c == '(') {
            ++i_;
            BkNode e = expr();
            expect(')');
            return e;
        }
        fail("expected a ket or '('");
    }

    Complex cexpr() {
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') {
            sign = s_[i_] == '-' ? -1.0 : 1.0;
            ++i_;
        }
        Complex v = sign * cterm();
        while (peek() == '+' || peek() == '-') {
            sign = s_[i_] == '-' ? -1.0 : 1.0;
            ++i_;
            v += sign * cterm();
        }
        return v;
    }

    Complex cterm() {
        Complex v = catom();
        for (;;) {
            const char c = peek();
            if (c == '*') {
                ++i_;
                v *= catom();
            } else if (c == '/' && !next_is_divisor_of_factor()) {
                ++i_;
                v /= catom();
            } else {
                return v;
            }
        }
    }

    /// Inside an unparenthesized coefficient every '/' belongs to it.
    static bool next_is_divisor_of_factor() { return false; }

    Complex catom() {
        skip();
        if (starts_with("sqrt")) {
            i_ += 4;
            const double x = number();
            return std::sqrt(x);
        }
        if (peek() == 'i') {
            ++i_;
            return {0.0, 1.0};
        }
        const double x = number();
        if (i_ < s_.size() && s_[i_] == 'i') {
            ++i_;
            return {0.0, x};
        }
        return x;
    }

    double number() {
        skip();
        double x = 0.0;
        const char *b = s_.data() + i_;
        const auto [end, ec] = std::from_chars(b, s_.data() + s_.size(), x);
        if (ec != std::errc() || end == b) {
            fail("expected a number");
        }
        i_ += static_cast<std::size_t>(end - b);
        return x;
    }

    int integer() {
        skip();
        int x = 0;
        const char *b = s_.data() + i_;
        const auto [end, ec] = std::from_chars(b, s_.data() + s_.size(), x);
        if (ec != std::errc() || end == b) {
            fail("expected a qubit index");
        }
        i_ += static_cast<std::size_t>(end - b);
        return x;
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

inline int bk_width(const BkNode &n) {
    int w = 0;
    switch (n.kind) {
    case BkNode::Kind::Ket:
        w = static_cast<int>(n.bits.size());
        break;
    case BkNode::Kind::Prod:
        for (const auto &k : n.kids) {
            w += bk_width(k);
        }
        break;
    case BkNode::Kind::Sum:
        w = bk_width(n.kids.front());
        for (const auto &k : n.kids) {
            if (bk_width(k) != w) {
                throw QubitCoverage("summands at position " + std::to_string(k.pos) +
                                    " act on a different number of qubits");
            }
        }
        break;
    }
    if (!n.annot.empty() && static_cast<int>(n.annot.size()) != w) {
        throw QubitCoverage("qubit list at position " + std::to_string(n.pos) +
                            " does not match the factor width");
    }
    return w;
}

/// Sum whose children are leaves on one qubit, folded into a single leaf.
inline TreeNode collapse_leaf_sum(TreeNode t) {
    if (!t.is_sum()) {
        return t;
    }
    const auto &ch = t.children();
    if (!std::all_of(ch.begin(), ch.end(), [](const TreeNode &c) { return c.is_leaf(); })) {
        return t;
    }
    AmpLeaf acc{ch.front().leaf().qubit, 0.0, 0.0};
    for (const auto &c : ch) {
        acc.a += c.leaf().a;
        acc.b += c.leaf().b;
    }
    return acc;
}

inline TreeNode bk_resolve(const BkNode &n, const std::vector<int> &ctx) {
    TreeNode out;
    switch (n.kind) {
    case BkNode::Kind::Ket: {
        std::vector<TreeNode> leaves;
        for (std::size_t k = 0; k < n.bits.size(); ++k) {
            leaves.push_back(n.bits[k] == '0' ? leaf(ctx[k], 1.0, 0.0) : leaf(ctx[k], 0.0, 1.0));
        }
        out = make_product(std::move(leaves));
        break;
    }
    case BkNode::Kind::Prod: {
        std::vector<bool> used(ctx.size(), false);
        std::vector<TreeNode> parts;
        for (const auto &f : n.kids) {
            const int w = bk_width(f);
            std::vector<int> sub;
            if (!f.annot.empty()) {
                for (int q : f.annot) {
                    const auto it = std::find(ctx.begin(), ctx.end(), q);
                    if (it == ctx.end() || used[static_cast<std::size_t>(it - ctx.begin())]) {
                        throw QubitCoverage("qubit " + std::to_string(q) + " at position " +
                                            std::to_string(f.pos) + " is unavailable here");
                    }
                    used[static_cast<std::size_t>(it - ctx.begin())] = true;
                    sub.push_back(q);
                }
            } else {
                for (std::size_t k = 0; k < ctx.size() && static_cast<int>(sub.size()) < w; ++k) {
                    if (!used[k]) {
                        used[k] = true;
                        sub.push_back(ctx[k]);
                    }
                }
            }
            if (static_cast<int>(sub.size()) != w) {
                throw QubitCoverage("too few qubits for the factor at position " + std::to_string(f.pos));
            }
            parts.push_back(bk_resolve(f, sub));
        }
        out = make_product(std::move(parts));
        break;
    }
    case BkNode::Kind::Sum: {
        std::vector<TreeNode> parts;
        for (const auto &k : n.kids) {
            parts.push_back(bk_resolve(k, ctx));
        }
        out = collapse_leaf_sum(make_sum(std::move(parts)));
        break;
    }
    }
    if (n.coeff != Complex(1.0)) {
        out = scale_tree(std::move(out), n.coeff);
    }
    return out;
}

inline std::string format_real(double x) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return {buf, end};
}

/// Coefficient prefix; empty for 1, parenthesized unless a plain non-negative real.
inline std::string format_coeff(Complex c) {
    if (c == Complex(1.0)) {
        return "";
    }
    if (c.imag() == 0.0 && !std::signbit(c.real())) {
        return format_real(c.real());
    }
    std::string s = "(";
    if (c.imag() == 0.0) {
        s += format_real(c.real());
    } else if (c.real() == 0.0) {
        s += format_real(c.imag()) + "i";
    } else {
        s += format_real(c.real());
        s += std::signbit(c.imag()) ? "" : "+";
        s += format_real(c.imag()) + "i";
    }
    return s + ")";
}

inline bool is_basis_leaf(const TreeNode &t) {
    if (!t.is_leaf()) {
        return false;
    }
    const auto &l = t.leaf();
    return (l.a == Complex(1.0) && l.b == Complex(0.0)) || (l.a == Complex(0.0) && l.b == Complex(1.0));
}

inline std::string print_node(const TreeNode &t, bool top);

inline std::string print_leaf(const AmpLeaf &l) {
    if (l.b == Complex(0.0)) {
        return format_coeff(l.a) + "|0>";
    }
    if (l.a == Complex(0.0)) {
        return format_coeff(l.b) + "|1>";
    }
    return "(" + format_coeff(l.a) + "|0> + " + format_coeff(l.b) + "|1>)";
}

inline std::string annotation(QubitMask m) {
    std::string s = "@[";
    bool first = true;
    for (int q : mask_qubits(m)) {
        s += first ? "" : ",";
        s += std::to_string(q);
        first = false;
    }
    return s + "]";
}

inline std::string print_product(const TreeNode &t) {
    const auto ctx = mask_qubits(qubits_of(t));
    std::vector<bool> used(ctx.size(), false);
    std::string s;
    std::string pending_bits; // run of unannotated basis leaves
    const auto flush = [&] {
        if (!pending_bits.empty()) {
            s += "|" + pending_bits + ">";
            pending_bits.clear();
        }
    };
    for (const auto &c : t.children()) {
        const QubitMask m = qubits_of(c);
        const int w = std::popcount(m);
        // what positional assignment would hand this factor
        QubitMask positional = 0;
        int taken = 0;
        for (std::size_t k = 0; k < ctx.size() && taken < w; ++k) {
            if (!used[k]) {
                positional |= qubit_mask(ctx[k]);
                ++taken;
            }
        }
        for (std::size_t k = 0; k < ctx.size(); ++k) {
            if ((m & qubit_mask(ctx[k])) != 0U) {
                used[k] = true;
            }
        }
        const bool annotated = positional != m;
        if (!annotated && is_basis_leaf(c)) {
            pending_bits += c.leaf().a == Complex(1.0) ? '0' : '1';
            continue;
        }
        flush();
        s += print_node(c, false);
        if (annotated) {
            s += annotation(m);
        }
    }
    flush();
    return s;
}

inline std::string print_node(const TreeNode &t, bool top) {
    if (t.is_leaf()) {
        return print_leaf(t.leaf());
    }
    if (t.is_product()) {
        return print_product(t);
    }
    std::string s = top ? "" : "(";
    bool first = true;
    for (const auto &c : t.children()) {
        s += first ? "" : " + ";
        s += print_node(c, false);
        first = false;
    }
    return s + (top ? "" : ")");
}

} // namespace detail

/// Parses a bra-ket formula into a canonical tree over qubits 1..n.
[[nodiscard]] inline TreeNode parse_braket(std::string_view text) {
    const detail::BkNode root = detail::BraketParser(text).parse();
    const int n = detail::bk_width(root);
    if (n < 1 || n > kMaxQubits) {
        throw QubitCoverage("formula acts on " + std::to_string(n) + " qubits; 1..4 supported");
    }
    std::vector<int> ctx;
    for (int q = 1; q <= n; ++q) {
        ctx.push_back(q);
    }
    TreeNode t = canonicalize(detail::bk_resolve(root, ctx));
    covered_qubits(t);
    return t;
}

/// Prints a tree; leaf amplitudes are written exactly, so parse_braket
/// inverts this on parser-produced canonical trees.
[[nodiscard]] inline std::string print_braket(const TreeNode &t) {
    validate(t);
    return detail::print_node(t, true);
}

} // namespace treesize
