#pragma once

/**
 * @file
 * Multi-restart maximization of |<target|tree>|^2 / <tree|tree> over the leaf
 * amplitudes of a shape.
 *
 * Each restart starts from complex-Gaussian leaves and runs L-BFGS (Ceres
 * gradient solver) on the real and imaginary parts. The tree value is
 * multilinear in the leaves, so the gradient comes from one forward pass and
 * one adjoint pass.
 */

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include <functional>
#include <random>

#include "shapes.hpp"

namespace treesize {

struct OptOptions {
    int restarts = 64;
    std::uint64_t seed = 0;
    int max_iterations = 2000;
    /// Restarts stop early once this value is reached.
    double stop_at = 1.0 - 1e-13;
    /// When set, only restarts whose final parameters pass this test may
    /// become the reported optimum.
    std::function<bool(std::span<const Complex>)> admissible = nullptr;
};

inline constexpr int kMaxRestarts = 100000;

/// Value and Wirtinger gradient df/dz of a real function of complex variables.
using ComplexObjective = std::function<double(std::span<const Complex> z, std::span<Complex> grad)>;

struct ComplexMaxResult {
    /// Best admissible value; -inf when no restart was admissible.
    double best = 0.0;
    /// Best value over all restarts, admissible or not.
    double best_any = 0.0;
    std::vector<Complex> params;
    int restarts_used = 0;
    bool converged = false;
};

namespace detail {

class CeresAdapter final : public ceres::FirstOrderFunction {
  public:
    CeresAdapter(const ComplexObjective &f, int n) : f_(f), n_(n), z_(n), g_(n) {}

    bool Evaluate(const double *x, double *cost, double *gradient) const override {
        for (int k = 0; k < n_; ++k) {
            z_[k] = {x[2 * k], x[2 * k + 1]};
        }
        const double v = f_(z_, g_);
        if (!std::isfinite(v)) {
            return false;
        }
        *cost = 1.0 - v;
        if (gradient != nullptr) {
            for (int k = 0; k < n_; ++k) {
                gradient[2 * k] = -2.0 * g_[k].real();
                gradient[2 * k + 1] = 2.0 * g_[k].imag();
            }
        }
        return true;
    }
    int NumParameters() const override { return 2 * n_; }

  private:
    const ComplexObjective &f_;
    int n_;
    mutable std::vector<Complex> z_;
    mutable std::vector<Complex> g_;
};

inline std::uint64_t restart_seed(std::uint64_t seed, int r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                      static_cast<std::uint32_t>(r)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (std::uint64_t{out[0]} << 32U) | out[1];
}

} // namespace detail

/// Maximizes f over n complex variables from random starts. Ties keep the
/// earliest restart, so the result depends only on (seed, restarts).
[[nodiscard]] inline ComplexMaxResult maximize_complex(const ComplexObjective &f, int n,
                                                       const OptOptions &opt = {}) {
    if (opt.restarts < 1) {
        throw BadParams("at least one restart is required");
    }
    if (opt.restarts > kMaxRestarts) {
        throw BudgetExceeded("restart budget above " + std::to_string(kMaxRestarts));
    }
    ceres::GradientProblemSolver::Options so;
    so.line_search_direction_type = ceres::LBFGS;
    so.max_num_iterations = opt.max_iterations;
    so.function_tolerance = 1e-14;
    so.gradient_tolerance = 1e-13;
    so.parameter_tolerance = 1e-14;
    so.logging_type = ceres::SILENT;
    so.minimizer_progress_to_stdout = false;

    ComplexMaxResult out;
    out.best = -std::numeric_limits<double>::infinity();
    out.best_any = out.best;
    std::vector<double> x(2 * static_cast<std::size_t>(n));
    for (int r = 0; r < opt.restarts; ++r) {
        std::mt19937_64 rng(detail::restart_seed(opt.seed, r));
        std::normal_distribution<double> nd(0.0, 1.0);
        for (auto &v : x) {
            v = nd(rng);
        }
        ceres::GradientProblem problem(new detail::CeresAdapter(f, n));
        ceres::GradientProblemSolver::Summary summary;
        ceres::Solve(so, problem, x.data(), &summary);
        std::vector<Complex> z(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            z[k] = {x[2 * k], x[2 * k + 1]};
        }
        std::vector<Complex> g(static_cast<std::size_t>(n));
        const double v = f(z, g);
        out.restarts_used = r + 1;
        if (!std::isfinite(v)) {
            continue;
        }
        out.best_any = std::max(out.best_any, v);
        if (v > out.best && (!opt.admissible || opt.admissible(z))) {
            out.best = v;
            out.params = std::move(z);
            out.converged = summary.termination_type == ceres::CONVERGENCE;
        }
        if (out.best >= opt.stop_at) {
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Compiled shapes

/// A shape flattened into post-order with precomputed index maps, for fast
/// repeated evaluation and adjoint passes.
class CompiledShape {
  public:
    explicit CompiledShape(const TreeShape &s) : shape_(s) {
        n_ = covered_qubits(s);
        build(s);
    }

    [[nodiscard]] int n_qubits() const { return n_; }
    [[nodiscard]] int n_leaves() const { return n_leaves_; }
    [[nodiscard]] const TreeShape &shape() const { return shape_; }

    /// Evaluates with leaf amplitudes z (two per leaf, depth-first order);
    /// returns the root vector over qubits 1..n.
    const Amplitudes &forward(std::span<const Complex> z) const {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const Node &nd = nodes_[i];
            Amplitudes &out = buf_[i];
            switch (nd.kind) {
            case Kind::Leaf:
                out[0] = z[2 * nd.leaf];
                out[1] = z[2 * nd.leaf + 1];
                break;
            case Kind::Sum:
                std::fill(out.begin(), out.end(), Complex(0.0));
                for (int k : nd.kids) {
                    for (std::size_t b = 0; b < out.size(); ++b) {
                        out[b] += buf_[k][b];
                    }
                }
                break;
            case Kind::Product:
                for (std::size_t b = 0; b < out.size(); ++b) {
                    Complex p = 1.0;
                    for (std::size_t c = 0; c < nd.kids.size(); ++c) {
                        p *= buf_[nd.kids[c]][nd.sub[c][b]];
                    }
                    out[b] = p;
                }
                break;
            }
        }
        return buf_.back();
    }

    /// After forward(): gradient of <w|v> with respect to every leaf
    /// amplitude, written into grad (two per leaf). `w_conj` holds conj(w).
    void adjoint(std::span<const Complex> w_conj, std::span<Complex> grad) const {
        std::copy(w_conj.begin(), w_conj.end(), adj_.back().begin());
        for (std::size_t ii = nodes_.size(); ii-- > 0;) {
            const Node &nd = nodes_[ii];
            const Amplitudes &a = adj_[ii];
            switch (nd.kind) {
            case Kind::Leaf:
                grad[2 * nd.leaf] = a[0];
                grad[2 * nd.leaf + 1] = a[1];
                break;
            case Kind::Sum:
                for (int k : nd.kids) {
                    std::copy(a.begin(), a.end(), adj_[k].begin());
                }
                break;
            case Kind::Product:
                for (int k : nd.kids) {
                    std::fill(adj_[k].begin(), adj_[k].end(), Complex(0.0));
                }
                for (std::size_t b = 0; b < a.size(); ++b) {
                    for (std::size_t c = 0; c < nd.kids.size(); ++c) {
                        Complex p = a[b];
                        for (std::size_t o = 0; o < nd.kids.size(); ++o) {
                            if (o != c) {
                                p *= buf_[nd.kids[o]][nd.sub[o][b]];
                            }
                        }
                        adj_[nd.kids[c]][nd.sub[c][b]] += p;
                    }
                }
                break;
            }
        }
    }

  private:
    enum class Kind { Leaf, Sum, Product };
    struct Node {
        Kind kind = Kind::Leaf;
        int leaf = -1;
        std::vector<int> kids;
        std::vector<std::vector<std::uint8_t>> sub;
    };

    int build(const TreeShape &s) {
        Node nd;
        if (s.is_leaf()) {
            nd.leaf = n_leaves_++;
            return push(std::move(nd), 2);
        }
        const QubitMask m = qubits_of(s);
        const auto qs = mask_qubits(m);
        for (const auto &c : s.children()) {
            nd.kids.push_back(build(c));
        }
        nd.kind = s.is_sum() ? Kind::Sum : Kind::Product;
        if (nd.kind == Kind::Product) {
            for (const auto &c : s.children()) {
                const QubitMask cm = qubits_of(c);
                std::vector<std::uint8_t> sub(std::size_t{1} << qs.size());
                for (std::size_t b = 0; b < sub.size(); ++b) {
                    sub[b] = static_cast<std::uint8_t>(detail::restrict_index(b, qs, cm));
                }
                nd.sub.push_back(std::move(sub));
            }
        }
        return push(std::move(nd), std::size_t{1} << qs.size());
    }

    int push(Node nd, std::size_t dim) {
        nodes_.push_back(std::move(nd));
        buf_.emplace_back(dim);
        adj_.emplace_back(dim);
        return static_cast<int>(nodes_.size()) - 1;
    }

    int n_ = 0;
    int n_leaves_ = 0;
    TreeShape shape_;
    std::vector<Node> nodes_;
    mutable std::vector<Amplitudes> buf_;
    mutable std::vector<Amplitudes> adj_;
};

/// |<t|v>|^2 / <v|v> for v the compiled tree at z, with its Wirtinger gradient.
class OverlapObjective {
  public:
    OverlapObjective(const CompiledShape &c, const PureState &target)
        : c_(c), tconj_(target.dim()), vconj_(target.dim()), gt_(2 * c.n_leaves()),
          gv_(2 * c.n_leaves()) {
        for (std::size_t i = 0; i < target.dim(); ++i) {
            tconj_[i] = std::conj(target[i]);
        }
    }

    double operator()(std::span<const Complex> z, std::span<Complex> grad) const {
        const Amplitudes &v = c_.forward(z);
        Complex nn = 0.0;
        double d = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            nn += tconj_[i] * v[i];
            d += std::norm(v[i]);
            vconj_[i] = std::conj(v[i]);
        }
        if (!(d > 1e-300)) {
            std::fill(grad.begin(), grad.end(), Complex(0.0));
            return 0.0;
        }
        const double f = std::norm(nn) / d;
        if (!grad.empty()) {
            c_.adjoint(tconj_, gt_);
            c_.adjoint(vconj_, gv_);
            for (std::size_t k = 0; k < grad.size(); ++k) {
                grad[k] = (std::conj(nn) * gt_[k] - f * gv_[k]) / d;
            }
        }
        return std::min(f, 1.0);
    }

  private:
    const CompiledShape &c_;
    Amplitudes tconj_;
    mutable Amplitudes vconj_;
    mutable std::vector<Complex> gt_;
    mutable std::vector<Complex> gv_;
};

struct OptResult {
    /// Overlap of `tree`; 0 with an empty tree when no restart was admissible.
    double best_overlap = 0.0;
    /// Best overlap over all restarts, ignoring OptOptions::admissible.
    double best_any = 0.0;
    TreeNode tree;
    int restarts_used = 0;
    bool converged = false;
};

/// Best squared overlap between `target` and any tree of the given shape.
[[nodiscard]] inline OptResult max_overlap(const PureState &target, const TreeShape &shape,
                                           const OptOptions &opt = {}) {
    const CompiledShape c(shape);
    if (c.n_qubits() != target.n_qubits()) {
        throw QubitCoverage("shape covers " + std::to_string(c.n_qubits()) + " qubits, target has " +
                            std::to_string(target.n_qubits()));
    }
    const OverlapObjective obj(c, target);
    const ComplexObjective f = [&obj](std::span<const Complex> z, std::span<Complex> g) {
        return obj(z, g);
    };
    const auto r = maximize_complex(f, 2 * c.n_leaves(), opt);
    OptResult out;
    out.best_any = r.best_any;
    out.restarts_used = r.restarts_used;
    if (r.params.empty()) {
        return out;
    }
    out.tree = instantiate(shape, r.params);
    out.best_overlap = overlap2(evaluate(out.tree), target);
    out.best_any = std::max(out.best_any, out.best_overlap);
    out.restarts_used = r.restarts_used;
    out.converged = r.converged;
    return out;
}

} // namespace treesize
