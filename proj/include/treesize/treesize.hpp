#pragma once

/**
 * @file
 * Tree size for two to four qubits.
 *
 * Two and three qubits are exact by SLOCC class. For four qubits the maximal
 * value 16 is exact on irreducible A|BCD states; every other state gets a
 * constructed upper bound (at most 15 leaves) and a structural lower bound.
 * ts_oracle is an independent, optimizer-backed search over all shapes.
 */

#include <algorithm>
#include <optional>

#include "irreducible.hpp"
#include "optimize.hpp"

namespace treesize {

enum class TsMethod { Classification, IrreducibleDetection, Construction, Oracle };

[[nodiscard]] inline std::string to_string(TsMethod m) {
    switch (m) {
    case TsMethod::Classification:
        return "Classification";
    case TsMethod::IrreducibleDetection:
        return "IrreducibleDetection";
    case TsMethod::Construction:
        return "Construction";
    case TsMethod::Oracle:
        return "Oracle";
    }
    return "?";
}

struct TsResult {
    int lower = 0;
    int upper = 0;
    bool exact = false;
    TreeNode tree;
    TsMethod method = TsMethod::Classification;
};

inline constexpr double kTreeVerifyTol = 1e-10;

namespace detail {

inline void verify_tree(const TreeNode &t, std::span<const Complex> amps, const char *what) {
    const auto v = evaluate_raw(t);
    const double nv = norm2(v);
    const double na = norm2(amps);
    const double ov = nv > 0.0 && na > 0.0 ? std::norm(inner(v, amps)) / (nv * na) : 0.0;
    if (!(ov >= 1.0 - kTreeVerifyTol)) {
        throw Degenerate(std::string(what) + ": constructed tree does not reproduce the state (overlap " +
                         std::to_string(ov) + ")");
    }
}

/// Raw residual check for trees that feed into sums.
inline void verify_raw(const TreeNode &t, std::span<const Complex> amps, const char *what) {
    const auto v = evaluate_raw(t);
    double err = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        err += std::norm(v[i] - amps[i]);
    }
    if (!(std::sqrt(err) <= 1e-7 * std::sqrt(norm2(amps)))) {
        throw Degenerate(std::string(what) + ": construction lost accuracy");
    }
}

inline TreeNode product_tree(std::span<const Complex> amps, std::span<const int> qubits) {
    const auto f = product_factors(amps);
    std::vector<TreeNode> kids;
    for (std::size_t k = 0; k < f.size(); ++k) {
        kids.push_back(leaf(qubits[k], f[k][0], f[k][1]));
    }
    return make_product<AmpLeaf>(std::move(kids));
}

inline Mat2 as_matrix(std::span<const Complex> amps4) { return {amps4[0], amps4[1], amps4[2], amps4[3]}; }

} // namespace detail

// ---------------------------------------------------------------------------
// Two qubits

/// Exact tree for a nonzero two-qubit vector: 2 leaves if product, else 4.
[[nodiscard]] inline TreeNode decompose2(std::span<const Complex> amps4, int qa = 1, int qb = 2) {
    if (amps4.size() != 4) {
        throw DimensionMismatch("decompose2 needs a two-qubit vector");
    }
    const Mat2 m = detail::as_matrix(amps4);
    const double scale = m.frobenius();
    if (!(scale > kZeroThreshold)) {
        throw ZeroVector();
    }
    const std::array<int, 2> qs{qa, qb};
    if (std::abs(m.det()) <= 1e-9 * scale * scale) {
        return detail::product_tree(amps4, qs);
    }
    return two_qubit_tree(qa, qb, m);
}

[[nodiscard]] inline TsResult ts2(const PureState &state) {
    if (state.n_qubits() != 2) {
        throw DimensionMismatch("ts2 needs a two-qubit state");
    }
    TsResult out;
    out.tree = decompose2(state.span());
    detail::verify_tree(out.tree, state.span(), "ts2");
    out.lower = out.upper = size(out.tree);
    out.exact = true;
    return out;
}

// ---------------------------------------------------------------------------
// Three qubits

[[nodiscard]] inline int ts3_of(Kind3 k) {
    switch (k) {
    case Kind3::Product:
        return 3;
    case Kind3::Biseparable:
        return 5;
    case Kind3::GHZ:
        return 6;
    case Kind3::W:
        return 8;
    }
    return 8;
}

/// Exact tree of minimal size for the class of a nonzero three-qubit vector,
/// on the given qubit labels (default 1, 2, 3). The tree evaluates to `amps`
/// itself, not just to its ray.
[[nodiscard]] inline TreeNode decompose3(std::span<const Complex> amps8, std::array<int, 3> labels = {1, 2, 3}) {
    static constexpr std::array<int, 3> q{1, 2, 3};
    const auto cls = classify3(amps8);
    const auto lf = [](int qubit, const Vec2 &v) { return leaf(qubit, v[0], v[1]); };
    TreeNode t;
    switch (cls.kind) {
    case Kind3::Product:
        t = detail::product_tree(amps8, q);
        break;
    case Kind3::Biseparable: {
        const int s = cls.partition_qubit;
        const auto cm = coeff_matrices(amps8, s);
        const auto rest = others3(s);
        // psi = u (x) M with M the larger coefficient matrix
        const bool use1 = cm.c1.frobenius() > cm.c0.frobenius();
        const Mat2 &m = use1 ? cm.c1 : cm.c0;
        int piv = 0;
        for (int i = 1; i < 4; ++i) {
            if (std::abs(m.v[i]) > std::abs(m.v[piv])) {
                piv = i;
            }
        }
        const Vec2 u{cm.c0.v[piv] / m.v[piv], cm.c1.v[piv] / m.v[piv]};
        t = make_product<AmpLeaf>({lf(q[s - 1], u), two_qubit_tree(q[rest[0] - 1], q[rest[1] - 1], m)});
        break;
    }
    case Kind3::GHZ: {
        const auto g = ghz_terms(amps8);
        std::vector<TreeNode> terms;
        for (const auto &[c, r] : {std::pair{g.alpha, g.r1}, std::pair{g.beta, g.r2}}) {
            const auto [u, v] = rank1_factor(r);
            terms.push_back(make_product<AmpLeaf>({lf(q[0], c), lf(q[1], u), lf(q[2], v)}));
        }
        t = make_sum<AmpLeaf>(std::move(terms));
        break;
    }
    case Kind3::W: {
        // psi = A1|0> (A2|0> A3|1> + A2|1> A3|0>) + A1|1> A2|0> A3|0>
        const auto fr = w_frame(amps8);
        const auto col = [&](int k, int c) { return Vec2{fr.ops[k](0, c), fr.ops[k](1, c)}; };
        auto inner_sum = make_sum<AmpLeaf>({make_product<AmpLeaf>({lf(q[1], col(1, 0)), lf(q[2], col(2, 1))}),
                                            make_product<AmpLeaf>({lf(q[1], col(1, 1)), lf(q[2], col(2, 0))})});
        t = make_sum<AmpLeaf>(
            {make_product<AmpLeaf>({lf(q[0], col(0, 0)), std::move(inner_sum)}),
             make_product<AmpLeaf>({lf(q[0], col(0, 1)), lf(q[1], col(1, 0)), lf(q[2], col(2, 0))})});
        break;
    }
    }
    detail::verify_raw(t, amps8, "decompose3");
    return relabel(std::move(t), std::span<const int>(labels));
}

[[nodiscard]] inline TsResult ts3(const PureState &state) {
    if (state.n_qubits() != 3) {
        throw DimensionMismatch("ts3 needs a three-qubit state");
    }
    TsResult out;
    out.tree = decompose3(state.span());
    detail::verify_tree(out.tree, state.span(), "ts3");
    out.lower = out.upper = ts3_of(classify3(state).kind);
    out.exact = true;
    if (size(out.tree) != out.upper) {
        throw Degenerate("ts3: tree size disagrees with the class");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Four qubits: irreducible states

namespace detail {

/// The two crossing branches of a normal form, on local qubits 1..4.
inline TreeNode t88_local(const WNormalForm &nf, Family family, int sign) {
    std::array<Mat2, 4> m; // 12, 34, 13, 24
    if (family == Family::Case1) {
        const Complex s6 = std::sqrt(nf(6));
        const Complex s7 = std::sqrt(nf(7));
        const double sg = sign;
        const Complex r = s7 + sg * s6;
        m[0] = {0.0, -sg * s6 * s7, 1.0, 0.0};
        m[1] = {0.0, -sg * s6 / s7, 1.0, 0.0};
        m[2] = {0.0, s7 * r, 1.0, 0.0};
        m[3] = {0.0, r / s7, 1.0, 0.0};
    } else {
        const Complex c3 = nf(3);
        const Complex c5 = nf(5);
        const Complex d = c5 * (c5 - c3);
        m[0] = {2.0 * c3 / d, 1.0, 4.0 / d, 0.0};
        m[1] = {c5 / 2.0, c5 * c5 / 4.0, d / 4.0, 0.0};
        m[2] = {c5 / (c3 - c5), c3 / 2.0, 2.0 / (c3 - c5), 0.0};
        m[3] = {1.0, c3 / 2.0, (c3 - c5) / 2.0, 0.0};
    }
    return make_sum<AmpLeaf>({make_product<AmpLeaf>({two_qubit_tree(1, 2, m[0]), two_qubit_tree(3, 4, m[1])}),
                              make_product<AmpLeaf>({two_qubit_tree(1, 3, m[2]), two_qubit_tree(2, 4, m[3])})});
}

inline double raw_distance(std::span<const Complex> a, std::span<const Complex> b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        e += std::norm(a[i] - b[i]);
    }
    return std::sqrt(e);
}

} // namespace detail

/// Sum of two products of two-qubit trees over the crossing partitions
/// 12|34 and 13|24; 16 leaves.
[[nodiscard]] inline TreeNode decompose4_irreducible(const PureState &state) {
    if (state.n_qubits() != 4) {
        throw DimensionMismatch("decompose4_irreducible needs a four-qubit state");
    }
    const auto verdict = is_irreducible(state);
    if (!verdict.irreducible) {
        throw NotIrreducible("state does not have irreducible A|BCD form");
    }
    const auto nfr = normal_form(state.span(), 1);
    const auto family = check_family(nfr.nf);
    const auto target = normal_form_state(nfr.nf);
    TreeNode local;
    if (family == Family::Case1) {
        auto tp = detail::t88_local(nfr.nf, family, 1);
        auto tm = detail::t88_local(nfr.nf, family, -1);
        local = detail::raw_distance(evaluate_raw(tp), target) <= detail::raw_distance(evaluate_raw(tm), target)
                    ? std::move(tp)
                    : std::move(tm);
    } else {
        local = detail::t88_local(nfr.nf, family, 1);
    }
    local = ilo_pullback_tree(std::move(local), ILO(1, nfr.la));
    for (int k = 0; k < 3; ++k) {
        local = ilo_pullback_tree(std::move(local), ILO(k + 2, nfr.frame[k]));
    }
    detail::verify_tree(local, state.span(), "decompose4_irreducible");
    return local;
}

// ---------------------------------------------------------------------------
// Four qubits: reducible states

namespace detail {

/// One row of a two-row operator on the split qubit: the half it produces is
/// h0 + lambda h1, or h1 alone when `infinite`.
struct PencilDirection {
    Complex lambda = 0.0;
    bool infinite = false;
};

inline Amplitudes pencil_member(const std::array<Amplitudes, 2> &h, const PencilDirection &d) {
    if (d.infinite) {
        return h[1];
    }
    Amplitudes v(8);
    for (std::size_t i = 0; i < 8; ++i) {
        v[i] = h[0][i] + d.lambda * h[1][i];
    }
    return v;
}

/// Leaves needed for one half: 0 when it vanishes, else 1 + ts3.
inline int half_cost(std::span<const Complex> v, double scale) {
    if (std::sqrt(norm2(v)) <= 1e-12 * scale) {
        return 0;
    }
    return 1 + ts3_of(classify3(v).kind);
}

struct PencilPlan {
    int cost = std::numeric_limits<int>::max();
    int partition = 1;
    PencilDirection d0, d1;
};

inline PencilPlan best_pencil_plan(std::span<const Complex> amps16, int a) {
    const auto h = split_halves(amps16, a);
    const double n0 = std::sqrt(norm2(h[0]));
    const double n1 = std::sqrt(norm2(h[1]));
    const double scale = std::sqrt(norm2(amps16));
    std::vector<PencilDirection> cands{{0.0, false}, {0.0, true}};
    if (n0 > 1e-12 * scale && n1 > 1e-12 * scale) {
        Amplitudes p = h[0];
        Amplitudes q = h[1];
        for (auto &x : p) {
            x /= n0;
        }
        for (auto &x : q) {
            x /= n1;
        }
        const double s = n0 / n1;
        for (const Complex lam : rank_drop_lambdas(p, q)) {
            cands.push_back({lam * s, false});
        }
        const Poly det = pencil_hyperdeterminant(p, q);
        for (const Complex lam : poly_roots(det)) {
            if (std::abs(lam) > 1e-12) {
                cands.push_back({lam * s, false});
            }
        }
        double r = 0.0;
        for (const Complex lam : poly_roots(det)) {
            r = std::max(r, std::abs(lam));
        }
        for (const auto &c : cands) {
            if (!c.infinite) {
                r = std::max(r, std::abs(c.lambda) / s);
            }
        }
        cands.push_back({(1.0 + r) * s, false});
        cands.push_back({-(1.0 + r) * s, false});
    }
    std::vector<int> cost;
    for (const auto &c : cands) {
        try {
            cost.push_back(half_cost(pencil_member(h, c), scale));
        } catch (const Degenerate &) {
            cost.push_back(std::numeric_limits<int>::max() / 4);
        }
    }
    PencilPlan best;
    best.partition = a;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        for (std::size_t j = i + 1; j < cands.size(); ++j) {
            const auto &x = cands[i];
            const auto &y = cands[j];
            const double sep = x.infinite || y.infinite ? (x.infinite != y.infinite ? 1.0 : 0.0)
                                                        : std::abs(x.lambda - y.lambda) /
                                                              (1.0 + std::max(std::abs(x.lambda), std::abs(y.lambda)));
            if (sep < 1e-6 || cost[i] + cost[j] >= best.cost) {
                continue;
            }
            best.cost = cost[i] + cost[j];
            best.d0 = x;
            best.d1 = y;
        }
    }
    return best;
}

/// psi = sum_x (column x of m^-1)_a (x) half_x where the rows of m are the
/// two pencil directions.
inline TreeNode realize_pencil_plan(std::span<const Complex> amps16, const PencilPlan &plan) {
    const int a = plan.partition;
    const auto h = split_halves(amps16, a);
    const auto row = [](const PencilDirection &d) {
        return d.infinite ? std::array<Complex, 2>{0.0, 1.0} : std::array<Complex, 2>{1.0, d.lambda};
    };
    const auto r0 = row(plan.d0);
    const auto r1 = row(plan.d1);
    const Mat2 mi = Mat2{r0[0], r0[1], r1[0], r1[1]}.inverse();
    const auto rest = others4(a);
    const double scale = std::sqrt(norm2(amps16));
    std::vector<TreeNode> terms;
    for (int x = 0; x < 2; ++x) {
        const auto half = pencil_member(h, x == 0 ? plan.d0 : plan.d1);
        if (std::sqrt(norm2(half)) <= 1e-12 * scale) {
            continue;
        }
        terms.push_back(make_product<AmpLeaf>({leaf(a, mi(0, x), mi(1, x)), decompose3(half, rest)}));
    }
    return make_sum<AmpLeaf>(std::move(terms));
}

/// Product of two-qubit trees when the state factorizes across a 2|2 cut.
inline std::optional<TreeNode> two_two_product(std::span<const Complex> amps16) {
    static constexpr std::array<std::array<int, 4>, 3> pairings{{{1, 2, 3, 4}, {1, 3, 2, 4}, {1, 4, 2, 3}}};
    const double scale = std::sqrt(norm2(amps16));
    std::optional<TreeNode> best;
    for (const auto &pg : pairings) {
        const auto v = permute_qubits(amps16, pg);
        Eigen::Matrix4cd m;
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                m(r, c) = v[4 * r + c];
            }
        }
        const Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m);
        if (svd.singularValues()(1) > 1e-9 * scale) {
            continue;
        }
        int pr = 0;
        int pc = 0;
        m.cwiseAbs().maxCoeff(&pr, &pc);
        std::array<Complex, 4> left{};
        std::array<Complex, 4> right{};
        for (int k = 0; k < 4; ++k) {
            left[k] = m(k, pc) / m(pr, pc);
            right[k] = m(pr, k);
        }
        auto t = make_product<AmpLeaf>({decompose2(left, pg[0], pg[1]), decompose2(right, pg[2], pg[3])});
        if (!best || size(t) < size(*best)) {
            best = std::move(t);
        }
    }
    return best;
}

} // namespace detail

/// Smallest tree found over ILO pencil rewrites at every split qubit and over
/// 2|2 factorizations. At most 15 leaves for any reducible state; 14 when a
/// split can be turned into two GHZ-class halves.
[[nodiscard]] inline TreeNode decompose4_reducible(const PureState &state) {
    if (state.n_qubits() != 4) {
        throw DimensionMismatch("decompose4_reducible needs a four-qubit state");
    }
    std::optional<TreeNode> best;
    for (int a = 1; a <= 4; ++a) {
        const auto plan = detail::best_pencil_plan(state.span(), a);
        if (plan.cost >= std::numeric_limits<int>::max() / 4) {
            continue;
        }
        if (!best || plan.cost < size(*best)) {
            auto t = detail::realize_pencil_plan(state.span(), plan);
            best = std::move(t);
        }
    }
    if (auto t = detail::two_two_product(state.span()); t && (!best || size(*t) < size(*best))) {
        best = std::move(t);
    }
    if (!best || size(*best) > 15) {
        throw WitnessMissing("no reducible construction with at most 15 leaves was found");
    }
    detail::verify_tree(*best, state.span(), "decompose4_reducible");
    return *best;
}

/// Structural lower bound from the finest product partition: an entangled
/// block of k qubits needs a sum of at least two k-leaf products.
[[nodiscard]] inline int ts4_structural_lower(const PureState &state) {
    const double tol = 1e-9;
    std::vector<int> blocks;
    QubitMask left = full_mask(4);
    // single qubits that factor out
    for (int q = 1; q <= 4; ++q) {
        const auto h = split_halves(state.span(), q);
        Eigen::Matrix<Complex, 2, 8> m;
        for (int i = 0; i < 8; ++i) {
            m(0, i) = h[0][i];
            m(1, i) = h[1][i];
        }
        const Eigen::JacobiSVD<Eigen::Matrix<Complex, 2, 8>> svd(m);
        if (svd.singularValues()(1) <= tol) {
            blocks.push_back(q);
            left &= ~qubit_mask(q);
        }
    }
    // the remaining qubits form entangled blocks of total size rem
    const auto rem = mask_qubits(left).size();
    return static_cast<int>(blocks.size() + 2 * rem);
}

struct TsOptions {
    /// Also run ts_oracle below the constructed bound (slow for four qubits).
    bool use_oracle = false;
    OptOptions opt;
};

struct OracleResult {
    /// Smallest fitting size, or empty for NotFound.
    std::optional<int> size;
    TreeNode tree;
    std::string shape;
    /// Best overlap among admissible fits; when NotFound, the best overlap
    /// seen over all scanned shapes without the conditioning filter.
    double best_overlap = 0.0;
    int shapes_tried = 0;
};

/// Fits are accepted only with cancellation_ratio <= this. States in the
/// closure of a smaller shape (W inside GHZ) are approached only by trees
/// whose summands nearly cancel, with overlap deficit falling like R^-4;
/// reaching 1e-8 that way takes R of about 7 or more, while exact fits of
/// conditioned random states stay below about 3.6.
inline constexpr double kOracleMaxCancellation = 5.0;
inline constexpr double kOracleOverlap = 1.0 - 1e-8;

[[nodiscard]] inline OracleResult ts_oracle(const PureState &state, int max_leaves, const OptOptions &opt = {}) {
    const int n = state.n_qubits();
    if (n > 4) {
        throw Unsupported("ts_oracle supports at most four qubits");
    }
    const auto shapes = enumerate_shapes(n, max_leaves);
    OracleResult out;
    double best_any = 0.0;
    for (const auto &s : shapes) {
        OptOptions o = opt;
        o.stop_at = std::max(opt.stop_at, kOracleOverlap);
        o.admissible = [&s](std::span<const Complex> z) {
            return cancellation_ratio(instantiate(s, z)) <= kOracleMaxCancellation;
        };
        const auto r = max_overlap(state, s, o);
        ++out.shapes_tried;
        best_any = std::max(best_any, r.best_any);
        if (r.best_overlap >= kOracleOverlap) {
            out.size = size(s);
            out.tree = r.tree;
            out.shape = shape_key(s);
            out.best_overlap = r.best_overlap;
            return out;
        }
    }
    out.best_overlap = best_any;
    return out;
}

[[nodiscard]] inline TsResult ts4(const PureState &state, const TsOptions &topt = {}) {
    if (state.n_qubits() != 4) {
        throw DimensionMismatch("ts4 needs a four-qubit state");
    }
    TsResult out;
    if (is_irreducible(state).irreducible) {
        out.tree = decompose4_irreducible(state);
        out.lower = out.upper = 16;
        out.exact = true;
        out.method = TsMethod::IrreducibleDetection;
        return out;
    }
    out.tree = decompose4_reducible(state);
    out.upper = size(out.tree);
    out.lower = std::min(ts4_structural_lower(state), out.upper);
    out.method = TsMethod::Construction;
    if (topt.use_oracle && out.lower < out.upper) {
        const auto r = ts_oracle(state, out.upper - 1, topt.opt);
        if (r.size && r.best_overlap >= 1.0 - kTreeVerifyTol) {
            out.upper = *r.size;
            out.tree = r.tree;
        } else if (!r.size) {
            out.lower = out.upper;
        }
        out.method = TsMethod::Oracle;
    }
    out.exact = out.lower == out.upper;
    return out;
}

/// Dispatches on the qubit count (1 to 4).
[[nodiscard]] inline TsResult tree_size(const PureState &state, const TsOptions &topt = {}) {
    switch (state.n_qubits()) {
    case 1: {
        TsResult out;
        out.tree = leaf(1, state[0], state[1]);
        out.lower = out.upper = 1;
        out.exact = true;
        return out;
    }
    case 2:
        return ts2(state);
    case 3:
        return ts3(state);
    case 4:
        return ts4(state, topt);
    default:
        throw Unsupported("tree size is implemented for 1 to 4 qubits");
    }
}

} // namespace treesize
