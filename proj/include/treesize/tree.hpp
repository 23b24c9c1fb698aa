#pragma once

/**
 * @file
 * Rooted trees of tensor-product and sum gates whose leaves are single-qubit
 * vectors a|0> + b|1> (TreeNode) or bare qubit labels (TreeShape).
 *
 * Structural invariants of a valid tree:
 *   - children of a Product act on pairwise disjoint qubit sets;
 *   - children of a Sum all act on the same qubit set;
 *   - Products and Sums have at least two children.
 * Canonical trees are additionally flattened (no Sum directly under a Sum,
 * no Product directly under a Product) and have their children sorted.
 */

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qstate.hpp"

namespace treesize {

/// Bit (q-1) set for each 1-based qubit q.
using QubitMask = std::uint32_t;

[[nodiscard]] constexpr QubitMask qubit_mask(int q) { return QubitMask{1} << (q - 1); }
[[nodiscard]] constexpr QubitMask full_mask(int n) { return (QubitMask{1} << n) - 1; }

[[nodiscard]] inline std::vector<int> mask_qubits(QubitMask m) {
    std::vector<int> out;
    for (int q = 1; m != 0; ++q, m >>= 1U) {
        if ((m & 1U) != 0U) {
            out.push_back(q);
        }
    }
    return out;
}

/// Leaf payload of an amplitude tree: a|0> + b|1> on `qubit` (unnormalized).
struct AmpLeaf {
    int qubit = 1;
    Complex a = 1.0;
    Complex b = 0.0;
    friend bool operator==(const AmpLeaf &, const AmpLeaf &) = default;
};

/// Leaf payload of a shape: the qubit label only.
struct ShapeLeaf {
    int qubit = 1;
    friend bool operator==(const ShapeLeaf &, const ShapeLeaf &) = default;
};

template <class LeafT> struct BasicTree;

template <class LeafT> struct ProductOf {
    std::vector<BasicTree<LeafT>> children;
    friend bool operator==(const ProductOf &, const ProductOf &) = default;
};

template <class LeafT> struct SumOf {
    std::vector<BasicTree<LeafT>> children;
    friend bool operator==(const SumOf &, const SumOf &) = default;
};

template <class LeafT> struct BasicTree {
    using Leaf = LeafT;
    using Product = ProductOf<LeafT>;
    using Sum = SumOf<LeafT>;

    std::variant<LeafT, Product, Sum> node;

    BasicTree() = default;
    BasicTree(LeafT l) : node(std::move(l)) {}          // NOLINT: implicit by design of builders
    BasicTree(Product p) : node(std::move(p)) {}        // NOLINT
    BasicTree(Sum s) : node(std::move(s)) {}            // NOLINT

    [[nodiscard]] bool is_leaf() const { return std::holds_alternative<LeafT>(node); }
    [[nodiscard]] bool is_product() const { return std::holds_alternative<Product>(node); }
    [[nodiscard]] bool is_sum() const { return std::holds_alternative<Sum>(node); }
    [[nodiscard]] const LeafT &leaf() const { return std::get<LeafT>(node); }
    [[nodiscard]] LeafT &leaf() { return std::get<LeafT>(node); }
    /// Children of a Product or Sum; empty for leaves.
    [[nodiscard]] const std::vector<BasicTree> &children() const {
        static const std::vector<BasicTree> none;
        if (const auto *p = std::get_if<Product>(&node)) {
            return p->children;
        }
        if (const auto *s = std::get_if<Sum>(&node)) {
            return s->children;
        }
        return none;
    }
    [[nodiscard]] std::vector<BasicTree> &children() {
        if (auto *p = std::get_if<Product>(&node)) {
            return p->children;
        }
        return std::get<Sum>(node).children;
    }

    friend bool operator==(const BasicTree &, const BasicTree &) = default;
};

using TreeNode = BasicTree<AmpLeaf>;
using TreeShape = BasicTree<ShapeLeaf>;

// ---------------------------------------------------------------------------
// Builders

[[nodiscard]] inline TreeNode leaf(int qubit, Complex a, Complex b) { return AmpLeaf{qubit, a, b}; }
[[nodiscard]] inline TreeShape shape_leaf(int qubit) { return ShapeLeaf{qubit}; }

/// Product node, flattening Product children; a single child is returned as is.
template <class LeafT>
[[nodiscard]] BasicTree<LeafT> make_product(std::vector<BasicTree<LeafT>> children) {
    std::vector<BasicTree<LeafT>> flat;
    for (auto &c : children) {
        if (c.is_product()) {
            for (auto &g : c.children()) {
                flat.push_back(std::move(g));
            }
        } else {
            flat.push_back(std::move(c));
        }
    }
    if (flat.size() == 1) {
        return std::move(flat.front());
    }
    return typename BasicTree<LeafT>::Product{std::move(flat)};
}

/// Sum node, flattening Sum children; a single child is returned as is.
template <class LeafT>
[[nodiscard]] BasicTree<LeafT> make_sum(std::vector<BasicTree<LeafT>> children) {
    std::vector<BasicTree<LeafT>> flat;
    for (auto &c : children) {
        if (c.is_sum()) {
            for (auto &g : c.children()) {
                flat.push_back(std::move(g));
            }
        } else {
            flat.push_back(std::move(c));
        }
    }
    if (flat.size() == 1) {
        return std::move(flat.front());
    }
    return typename BasicTree<LeafT>::Sum{std::move(flat)};
}

// ---------------------------------------------------------------------------
// Queries

/// Number of leaves.
template <class LeafT> [[nodiscard]] int size(const BasicTree<LeafT> &t) {
    if (t.is_leaf()) {
        return 1;
    }
    int s = 0;
    for (const auto &c : t.children()) {
        s += size(c);
    }
    return s;
}

template <class LeafT> [[nodiscard]] QubitMask qubits_of(const BasicTree<LeafT> &t) {
    if (t.is_leaf()) {
        return qubit_mask(t.leaf().qubit);
    }
    QubitMask m = 0;
    for (const auto &c : t.children()) {
        m |= qubits_of(c);
    }
    return m;
}

/// Throws QubitCoverage unless the structural invariants hold.
template <class LeafT> void validate(const BasicTree<LeafT> &t) {
    if (t.is_leaf()) {
        const int q = t.leaf().qubit;
        if (q < 1 || q > kMaxQubits) {
            throw QubitCoverage("leaf qubit " + std::to_string(q) + " outside 1..4");
        }
        return;
    }
    const auto &ch = t.children();
    if (ch.size() < 2) {
        throw QubitCoverage("gate with fewer than two children");
    }
    QubitMask acc = 0;
    const QubitMask first = qubits_of(ch.front());
    for (const auto &c : ch) {
        validate(c);
        const QubitMask m = qubits_of(c);
        if (t.is_product()) {
            if ((acc & m) != 0U) {
                throw QubitCoverage("product children share a qubit");
            }
            acc |= m;
        } else if (m != first) {
            throw QubitCoverage("sum children act on different qubit sets");
        }
    }
}

/// Validates and checks the tree covers exactly qubits 1..n; returns n.
template <class LeafT> int covered_qubits(const BasicTree<LeafT> &t) {
    validate(t);
    const QubitMask m = qubits_of(t);
    const int n = std::popcount(m);
    if (m != full_mask(n)) {
        throw QubitCoverage("tree does not cover qubits 1..n contiguously");
    }
    return n;
}

template <class LeafT> [[nodiscard]] BasicTree<ShapeLeaf> shape_of(const BasicTree<LeafT> &t) {
    if (t.is_leaf()) {
        return ShapeLeaf{t.leaf().qubit};
    }
    std::vector<TreeShape> ch;
    for (const auto &c : t.children()) {
        ch.push_back(shape_of(c));
    }
    if (t.is_product()) {
        return TreeShape::Product{std::move(ch)};
    }
    return TreeShape::Sum{std::move(ch)};
}

/// Compact structural key, e.g. "+(*(1,2,3),*(1,2,3))". Leaves print their qubit.
template <class LeafT> [[nodiscard]] std::string shape_key(const BasicTree<LeafT> &t) {
    if (t.is_leaf()) {
        return std::to_string(t.leaf().qubit);
    }
    std::string s = t.is_product() ? "*(" : "+(";
    bool first = true;
    for (const auto &c : t.children()) {
        if (!first) {
            s += ',';
        }
        first = false;
        s += shape_key(c);
    }
    s += ')';
    return s;
}

// ---------------------------------------------------------------------------
// Canonical form

namespace detail {
template <class LeafT> bool payload_less(const BasicTree<LeafT> &a, const BasicTree<LeafT> &b);

inline bool leaf_payload_less(const AmpLeaf &x, const AmpLeaf &y) {
    const auto key = [](const AmpLeaf &l) {
        return std::array<double, 4>{l.a.real(), l.a.imag(), l.b.real(), l.b.imag()};
    };
    return key(x) < key(y);
}
inline bool leaf_payload_less(const ShapeLeaf &, const ShapeLeaf &) { return false; }

template <class LeafT> bool payload_less(const BasicTree<LeafT> &a, const BasicTree<LeafT> &b) {
    if (a.is_leaf() && b.is_leaf()) {
        return leaf_payload_less(a.leaf(), b.leaf());
    }
    const auto &ca = a.children();
    const auto &cb = b.children();
    for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) {
        if (payload_less(ca[i], cb[i])) {
            return true;
        }
        if (payload_less(cb[i], ca[i])) {
            return false;
        }
    }
    return false;
}

/// Canonical child order: (size, qubit set, structural key, leaf payload).
template <class LeafT> bool canonical_less(const BasicTree<LeafT> &a, const BasicTree<LeafT> &b) {
    const int sa = size(a);
    const int sb = size(b);
    if (sa != sb) {
        return sa < sb;
    }
    const QubitMask ma = qubits_of(a);
    const QubitMask mb = qubits_of(b);
    if (ma != mb) {
        return ma < mb;
    }
    const std::string ka = shape_key(a);
    const std::string kb = shape_key(b);
    if (ka != kb) {
        return ka < kb;
    }
    return payload_less(a, b);
}
} // namespace detail

/// Flattens nested gates of the same kind and sorts children canonically.
template <class LeafT> [[nodiscard]] BasicTree<LeafT> canonicalize(BasicTree<LeafT> t) {
    if (t.is_leaf()) {
        return t;
    }
    std::vector<BasicTree<LeafT>> ch;
    for (auto &c : t.children()) {
        ch.push_back(canonicalize(std::move(c)));
    }
    BasicTree<LeafT> out = t.is_product() ? make_product(std::move(ch)) : make_sum(std::move(ch));
    if (!out.is_leaf()) {
        auto &oc = out.children();
        std::stable_sort(oc.begin(), oc.end(), detail::canonical_less<LeafT>);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

/// Amplitudes of a subtree over its own qubits (ascending order, big-endian).
struct PartialState {
    QubitMask mask = 0;
    Amplitudes amps;
};

namespace detail {
/// Extracts the sub-index of `b` (an index over `outer` qubits) restricted to `inner`.
inline std::size_t restrict_index(std::size_t b, const std::vector<int> &outer, QubitMask inner) {
    const int n = static_cast<int>(outer.size());
    std::size_t r = 0;
    for (int k = 0; k < n; ++k) {
        if ((inner & qubit_mask(outer[k])) != 0U) {
            r = (r << 1U) | static_cast<std::size_t>(qubit_bit(b, n, k + 1));
        }
    }
    return r;
}
} // namespace detail

[[nodiscard]] inline PartialState evaluate_partial(const TreeNode &t) {
    if (t.is_leaf()) {
        const auto &l = t.leaf();
        return {qubit_mask(l.qubit), {l.a, l.b}};
    }
    std::vector<PartialState> parts;
    for (const auto &c : t.children()) {
        parts.push_back(evaluate_partial(c));
    }
    if (t.is_sum()) {
        PartialState out = parts.front();
        for (std::size_t i = 1; i < parts.size(); ++i) {
            if (parts[i].mask != out.mask) {
                throw QubitCoverage("sum children act on different qubit sets");
            }
            for (std::size_t k = 0; k < out.amps.size(); ++k) {
                out.amps[k] += parts[i].amps[k];
            }
        }
        return out;
    }
    QubitMask m = 0;
    for (const auto &p : parts) {
        if ((m & p.mask) != 0U) {
            throw QubitCoverage("product children share a qubit");
        }
        m |= p.mask;
    }
    const auto qs = mask_qubits(m);
    PartialState out{m, Amplitudes(std::size_t{1} << qs.size(), 1.0)};
    for (std::size_t b = 0; b < out.amps.size(); ++b) {
        for (const auto &p : parts) {
            out.amps[b] *= p.amps[detail::restrict_index(b, qs, p.mask)];
        }
    }
    return out;
}

/// Unnormalized amplitude vector of a tree covering qubits 1..n.
[[nodiscard]] inline Amplitudes evaluate_raw(const TreeNode &t) {
    covered_qubits(t);
    return evaluate_partial(t).amps;
}

/// Normalized state of a tree covering qubits 1..n.
[[nodiscard]] inline PureState evaluate(const TreeNode &t) { return PureState::normalize(evaluate_raw(t)); }

/// Multiplies every leaf on op's qubit by op's matrix; evaluates to
/// apply_ilo(evaluate(t), op).
[[nodiscard]] inline TreeNode ilo_pullback_tree(TreeNode t, const ILO &op) {
    if ((qubits_of(t) & qubit_mask(op.qubit())) == 0U) {
        throw BadPartition("ILO qubit " + std::to_string(op.qubit()) + " is not covered by the tree");
    }
    const auto visit = [&op](auto &self, TreeNode &n) -> void {
        if (n.is_leaf()) {
            auto &l = n.leaf();
            if (l.qubit == op.qubit()) {
                const auto v = op.matrix().apply({l.a, l.b});
                l.a = v[0];
                l.b = v[1];
            }
            return;
        }
        for (auto &c : n.children()) {
            self(self, c);
        }
    };
    visit(visit, t);
    return t;
}

/// Renames qubits: a leaf on qubit q moves to qubit map[q-1].
template <class LeafT>
[[nodiscard]] BasicTree<LeafT> relabel(BasicTree<LeafT> t, std::span<const int> map) {
    if (t.is_leaf()) {
        t.leaf().qubit = map[static_cast<std::size_t>(t.leaf().qubit - 1)];
        return t;
    }
    for (auto &c : t.children()) {
        c = relabel(std::move(c), map);
    }
    return t;
}

/// Multiplies the tree's value by s (absorbed into one leaf of every summand).
[[nodiscard]] inline TreeNode scale_tree(TreeNode t, Complex s) {
    if (t.is_leaf()) {
        t.leaf().a *= s;
        t.leaf().b *= s;
        return t;
    }
    if (t.is_product()) {
        auto &ch = t.children();
        ch.front() = scale_tree(std::move(ch.front()), s);
        return t;
    }
    for (auto &c : t.children()) {
        c = scale_tree(std::move(c), s);
    }
    return t;
}

/// Sum of the norms of all summands, expanded down to the leaves: for a
/// product the product of child norms, for a sum the sum of child norms.
[[nodiscard]] inline double term_norm(const TreeNode &t) {
    if (t.is_leaf()) {
        return std::sqrt(std::norm(t.leaf().a) + std::norm(t.leaf().b));
    }
    double out = t.is_product() ? 1.0 : 0.0;
    for (const auto &c : t.children()) {
        out = t.is_product() ? out * term_norm(c) : out + term_norm(c);
    }
    return out;
}

/// term_norm(t) / |evaluate_raw(t)|: 1 when summands do not interfere,
/// large when the tree reaches its value by near-cancellation. Unchanged by
/// rescaling leaves. Infinite for a tree evaluating to zero.
[[nodiscard]] inline double cancellation_ratio(const TreeNode &t) {
    const double v = std::sqrt(norm2(evaluate_partial(t).amps));
    return v > 0.0 ? term_norm(t) / v : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Small builders used by the decompositions

/// Two-term tree of an arbitrary two-qubit vector m (rows: qubit qa, columns: qubit qb):
/// |0>_qa (m00|0>+m01|1>)_qb + |1>_qa (m10|0>+m11|1>)_qb. Four leaves.
[[nodiscard]] inline TreeNode two_qubit_tree(int qa, int qb, const Mat2 &m) {
    return make_sum<AmpLeaf>({make_product<AmpLeaf>({leaf(qa, 1.0, 0.0), leaf(qb, m(0, 0), m(0, 1))}),
                              make_product<AmpLeaf>({leaf(qa, 0.0, 1.0), leaf(qb, m(1, 0), m(1, 1))})});
}

} // namespace treesize
