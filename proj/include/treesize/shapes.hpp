#pragma once

/**
 * @file
 * Exhaustive enumeration of canonical tree shapes and the named families.
 *
 * Canonical shapes alternate layers: a Product partitions its qubits into
 * blocks (a block is a leaf or a Sum), a Sum adds at least two Products over
 * the same qubits. A shape over m qubits with more than 2^m leaves is never
 * needed, since every m-qubit state has a tree of that size, so such shapes
 * are pruned at every level.
 */

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "tree.hpp"

namespace treesize {

inline constexpr std::size_t kDefaultMaxShapes = 1'000'000;

/// Enumeration cap; TREESIZE_MAX_SHAPES overrides the default.
[[nodiscard]] inline std::size_t max_shapes_cap() {
    if (const char *env = std::getenv("TREESIZE_MAX_SHAPES")) {
        char *end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return kDefaultMaxShapes;
}

namespace detail {

struct ShapeSet {
    std::vector<TreeShape> prods;
    std::vector<TreeShape> sums;
};

class ShapeEnumerator {
  public:
    explicit ShapeEnumerator(std::size_t cap) : cap_(cap) {}

    /// Shapes rooted at a Product over `m` (or the leaf when |m| = 1).
    const std::vector<TreeShape> &prods(QubitMask m) { return get(m).prods; }
    /// Shapes rooted at a Sum over `m`.
    const std::vector<TreeShape> &sums(QubitMask m) { return get(m).sums; }

  private:
    static int limit(QubitMask m) { return 1 << std::popcount(m); }

    void count(std::size_t k) {
        total_ += k;
        if (total_ > cap_) {
            throw BudgetTooLarge("shape enumeration exceeds the cap of " + std::to_string(cap_) +
                                 " shapes");
        }
    }

    const ShapeSet &get(QubitMask m) {
        if (auto it = memo_.find(m); it != memo_.end()) {
            return it->second;
        }
        ShapeSet s;
        const auto qs = mask_qubits(m);
        if (qs.size() == 1) {
            s.prods.push_back(shape_leaf(qs.front()));
        } else {
            build_prods(m, s.prods);
            build_sums(m, s.prods, s.sums);
        }
        count(s.prods.size() + s.sums.size());
        return memo_.emplace(m, std::move(s)).first->second;
    }

    /// Options for one product block: the leaf, or any Sum over the block.
    std::vector<TreeShape> block_options(QubitMask b) {
        if (std::popcount(b) == 1) {
            return {shape_leaf(std::countr_zero(b) + 1)};
        }
        return sums(b);
    }

    void build_prods(QubitMask m, std::vector<TreeShape> &out) {
        std::vector<std::vector<QubitMask>> partitions;
        std::vector<QubitMask> cur;
        set_partitions(m, cur, partitions);
        const int cap = limit(m);
        for (const auto &blocks : partitions) {
            if (blocks.size() < 2) {
                continue;
            }
            std::vector<std::vector<TreeShape>> opts;
            for (QubitMask b : blocks) {
                opts.push_back(block_options(b));
            }
            std::vector<TreeShape> chosen;
            cartesian(opts, 0, chosen, 0, cap, out);
        }
    }

    static void set_partitions(QubitMask rest, std::vector<QubitMask> &cur,
                               std::vector<std::vector<QubitMask>> &out) {
        if (rest == 0U) {
            out.push_back(cur);
            return;
        }
        // the block containing the lowest remaining qubit
        const QubitMask low = rest & (~rest + 1U);
        const QubitMask others = rest & ~low;
        for (QubitMask sub = others;; sub = (sub - 1U) & others) {
            cur.push_back(low | sub);
            set_partitions(others & ~sub, cur, out);
            cur.pop_back();
            if (sub == 0U) {
                break;
            }
        }
    }

    static void cartesian(const std::vector<std::vector<TreeShape>> &opts, std::size_t i,
                          std::vector<TreeShape> &chosen, int leaves, int cap,
                          std::vector<TreeShape> &out) {
        if (i == opts.size()) {
            out.push_back(canonicalize(make_product(chosen)));
            return;
        }
        for (const auto &o : opts[i]) {
            const int s = size(o);
            if (leaves + s > cap) {
                continue;
            }
            chosen.push_back(o);
            cartesian(opts, i + 1, chosen, leaves + s, cap, out);
            chosen.pop_back();
        }
    }

    void build_sums(QubitMask m, const std::vector<TreeShape> &prods, std::vector<TreeShape> &out) {
        std::vector<int> sizes;
        for (const auto &p : prods) {
            sizes.push_back(size(p));
        }
        std::vector<std::size_t> pick;
        multisets(prods, sizes, 0, pick, 0, limit(m), out);
    }

    static void multisets(const std::vector<TreeShape> &prods, const std::vector<int> &sizes,
                          std::size_t from, std::vector<std::size_t> &pick, int leaves, int cap,
                          std::vector<TreeShape> &out) {
        if (pick.size() >= 2) {
            std::vector<TreeShape> ch;
            for (std::size_t k : pick) {
                ch.push_back(prods[k]);
            }
            out.push_back(canonicalize(make_sum(std::move(ch))));
        }
        for (std::size_t k = from; k < prods.size(); ++k) {
            if (leaves + sizes[k] > cap) {
                continue;
            }
            pick.push_back(k);
            multisets(prods, sizes, k, pick, leaves + sizes[k], cap, out);
            pick.pop_back();
        }
    }

    std::size_t cap_;
    std::size_t total_ = 0;
    std::map<QubitMask, ShapeSet> memo_;
};

inline bool shape_order(const TreeShape &a, const TreeShape &b) {
    const int sa = size(a);
    const int sb = size(b);
    return sa != sb ? sa < sb : shape_key(a) < shape_key(b);
}

} // namespace detail

/// Every canonical shape over qubits 1..n with at most max_leaves leaves,
/// ordered by (size, structural key).
[[nodiscard]] inline std::vector<TreeShape> enumerate_shapes(int n, int max_leaves,
                                                             std::size_t cap = max_shapes_cap()) {
    if (n < 1 || n > kMaxQubits) {
        throw Unsupported("shape enumeration supports 1..4 qubits");
    }
    if (max_leaves > 16) {
        throw BudgetTooLarge("at most 16 leaves can be enumerated");
    }
    detail::ShapeEnumerator en(cap);
    const QubitMask m = full_mask(n);
    std::vector<TreeShape> out;
    for (const auto *group : {&en.prods(m), &en.sums(m)}) {
        for (const auto &s : *group) {
            if (size(s) <= max_leaves) {
                out.push_back(s);
            }
        }
    }
    std::sort(out.begin(), out.end(), detail::shape_order);
    return out;
}

// ---------------------------------------------------------------------------
// Named families

namespace detail {

/// Name of a Product-rooted shape (or leaf) by its layout.
inline std::string product_name(const TreeShape &s, int n) {
    const int k = size(s);
    if (n == 2) {
        return "T_P";
    }
    if (n == 3) {
        return k == 3 ? "T_P" : "T_B";
    }
    return "T" + std::to_string(k);
}

} // namespace detail

/// Family name of a canonical shape: "T_E", "T_GHZ", "T_W", "T7+T7", ...
[[nodiscard]] inline std::string shape_family(const TreeShape &s) {
    const int n = std::popcount(qubits_of(s));
    if (!s.is_sum()) {
        return detail::product_name(s, n);
    }
    if (n == 2) {
        return "T_E";
    }
    std::vector<int> parts;
    for (const auto &c : s.children()) {
        parts.push_back(size(c));
    }
    std::sort(parts.begin(), parts.end());
    if (n == 3) {
        if (parts == std::vector<int>{3, 3}) {
            return "T_GHZ";
        }
        if (parts == std::vector<int>{3, 5}) {
            return "T_W";
        }
    }
    std::string name;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        name += (i == 0 ? "T" : "+T") + std::to_string(parts[i]);
    }
    return name;
}

struct NamedShape {
    std::string name;
    TreeShape shape;
};

/// The named families, instantiated over every qubit assignment.
[[nodiscard]] inline std::vector<NamedShape> catalog(int n) {
    std::vector<std::string> names;
    int max_leaves = 0;
    switch (n) {
    case 2:
        names = {"T_P", "T_E"};
        max_leaves = 4;
        break;
    case 3:
        names = {"T_P", "T_B", "T_GHZ", "T_W"};
        max_leaves = 8;
        break;
    case 4:
        names = {"T4",       "T6",    "T7",    "T8",    "T9",       "T4+T4+T4", "T4+T8",
                 "T6+T7",    "T4+T9", "T6+T9", "T7+T8", "T4+T4+T7", "T7+T7",    "T8+T8"};
        max_leaves = 16;
        break;
    default:
        throw Unsupported("catalog covers 2, 3 and 4 qubits");
    }
    std::vector<NamedShape> out;
    for (auto &s : enumerate_shapes(n, max_leaves)) {
        std::string fam = shape_family(s);
        if (std::find(names.begin(), names.end(), fam) != names.end()) {
            out.push_back({std::move(fam), std::move(s)});
        }
    }
    std::stable_sort(out.begin(), out.end(), [&names](const NamedShape &a, const NamedShape &b) {
        return std::find(names.begin(), names.end(), a.name) < std::find(names.begin(), names.end(), b.name);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Instantiation

namespace detail {
inline TreeNode instantiate_at(const TreeShape &s, std::span<const Complex> amps, std::size_t &k) {
    if (s.is_leaf()) {
        const Complex a = amps[k];
        const Complex b = amps[k + 1];
        k += 2;
        return leaf(s.leaf().qubit, a, b);
    }
    std::vector<TreeNode> ch;
    for (const auto &c : s.children()) {
        ch.push_back(instantiate_at(c, amps, k));
    }
    if (s.is_product()) {
        return TreeNode::Product{std::move(ch)};
    }
    return TreeNode::Sum{std::move(ch)};
}
} // namespace detail

/// Fills the leaves of `s` in depth-first order with (amps[2k], amps[2k+1]).
[[nodiscard]] inline TreeNode instantiate(const TreeShape &s, std::span<const Complex> amps) {
    if (amps.size() != 2 * static_cast<std::size_t>(size(s))) {
        throw DimensionMismatch("need two amplitudes per leaf");
    }
    std::size_t k = 0;
    return detail::instantiate_at(s, amps, k);
}

/// Shape filled with complex-Gaussian leaf amplitudes.
[[nodiscard]] inline TreeNode random_instance(const TreeShape &s, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Complex> amps(2 * static_cast<std::size_t>(size(s)));
    for (auto &a : amps) {
        a = detail::gaussian_complex(rng);
    }
    return instantiate(s, amps);
}

} // namespace treesize
