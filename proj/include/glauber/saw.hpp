#pragma once

// Tree of self-avoiding walks, exact marginals by tree recursion, and the
// spatial-mixing quantities a_u.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glauber/errors.hpp"
#include "glauber/exact.hpp"
#include "glauber/graph.hpp"

namespace glauber {

inline constexpr std::size_t default_saw_node_cap = 5'000'000;

struct SawNode {
    vertex origin = 0;                // phi(node)
    std::uint32_t parent = no_vertex; // index into SawTree::nodes
    std::uint32_t depth = 0;
    double coupling = 0.0; // coupling on the edge to the parent
    spin fixed = 0;        // nonzero for leaves whose spin is pinned
    bool cycle_leaf = false; // member of A (closes a cycle)
    bool stop_leaf = false;  // walk hit a stop vertex (e.g. a ball boundary)
};

/// Nodes are stored in depth-first preorder, so every child has a larger index
/// than its parent.
struct SawTree {
    std::vector<SawNode> nodes;
    std::size_t depth_limit = 0;

    const SawNode& root() const { return nodes.front(); }
    std::size_t size() const noexcept { return nodes.size(); }
    std::size_t cycle_leaf_count() const {
        return static_cast<std::size_t>(
            std::count_if(nodes.begin(), nodes.end(), [](const SawNode& x) { return x.cycle_leaf; }));
    }
};

struct saw_options {
    std::size_t depth = 0;                  // 0 means n (the tree is then complete)
    std::size_t node_cap = default_saw_node_cap;
    std::span<const vertex> lambda{};       // conditioning set
    std::span<const spin> eta{};            // spins on lambda
    std::span<const vertex> stop{};         // extra terminal vertices, left unpinned
};

namespace detail {

class saw_builder {
public:
    saw_builder(const IsingInstance& inst, const saw_options& opt)
        : inst_(inst), opt_(opt), pinned_(inst.num_vertices(), 0), stop_(inst.num_vertices(), false),
          on_path_(inst.num_vertices(), false), left_via_(inst.num_vertices(), no_vertex) {
        if (opt.lambda.size() != opt.eta.size()) throw invalid_input("conditioning set and configuration differ in length");
        for (std::size_t i = 0; i < opt.lambda.size(); ++i) {
            const vertex u = opt.lambda[i];
            if (u >= inst.num_vertices()) throw invalid_input("conditioning vertex out of range");
            if (opt.eta[i] != 1 && opt.eta[i] != -1) throw invalid_input("conditioning spins must be +1 or -1");
            if (inst.is_clamped(u) && inst.field(u).clamp_sign() != opt.eta[i])
                throw invalid_input("conditioning event has probability zero (vertex " + std::to_string(u) +
                                    " is clamped to the opposite sign)");
            pinned_[u] = opt.eta[i];
        }
        for (vertex u : opt.stop) {
            if (u >= inst.num_vertices()) throw invalid_input("stop vertex out of range");
            stop_[u] = true;
        }
        depth_limit_ = opt.depth == 0 ? inst.num_vertices() : opt.depth;
    }

    SawTree build(vertex v) {
        if (v >= inst_.num_vertices()) throw invalid_input("root out of range");
        if (pinned_[v] != 0) throw invalid_input("root is in the conditioning set");
        tree_.depth_limit = depth_limit_;
        SawNode root;
        root.origin = v;
        if (inst_.is_clamped(v)) {
            root.fixed = inst_.field(v).clamp_sign();
            tree_.nodes.push_back(root);
            return std::move(tree_);
        }
        tree_.nodes.push_back(root);
        on_path_[v] = true;
        expand(0);
        return std::move(tree_);
    }

private:
    std::uint32_t add(const SawNode& node) {
        if (tree_.nodes.size() >= opt_.node_cap)
            throw size_cap_exceeded("self-avoiding-walk tree exceeds node cap " + std::to_string(opt_.node_cap));
        tree_.nodes.push_back(node);
        return static_cast<std::uint32_t>(tree_.nodes.size() - 1);
    }

    void expand(std::uint32_t idx) {
        const vertex x = tree_.nodes[idx].origin;
        const std::uint32_t depth = tree_.nodes[idx].depth;
        if (depth >= depth_limit_) return;
        const vertex parent_origin = idx == 0 ? no_vertex : tree_.nodes[tree_.nodes[idx].parent].origin;
        const auto nb = inst_.graph().neighbors(x);
        const auto cp = inst_.neighbor_couplings(x);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const vertex w = nb[k];
            if (w == parent_origin) continue;
            SawNode child;
            child.origin = w;
            child.parent = idx;
            child.depth = depth + 1;
            child.coupling = cp[k];
            if (on_path_[w]) {
                // Closing a cycle at w: pin + when we come back through a larger
                // neighbor of w than the one the walk left w through.
                child.cycle_leaf = true;
                child.fixed = x > left_via_[w] ? 1 : -1;
                add(child);
                continue;
            }
            if (pinned_[w] != 0) {
                child.fixed = pinned_[w];
                add(child);
                continue;
            }
            if (inst_.is_clamped(w)) {
                child.fixed = inst_.field(w).clamp_sign();
                add(child);
                continue;
            }
            if (stop_[w]) {
                child.stop_leaf = true;
                add(child);
                continue;
            }
            const std::uint32_t c = add(child);
            on_path_[w] = true;
            left_via_[x] = w;
            expand(c);
            on_path_[w] = false;
        }
        left_via_[x] = no_vertex;
    }

    const IsingInstance& inst_;
    const saw_options& opt_;
    std::vector<spin> pinned_;
    std::vector<bool> stop_;
    std::vector<bool> on_path_;
    std::vector<vertex> left_via_; // neighbor through which the current walk left each path vertex
    std::size_t depth_limit_ = 0;
    SawTree tree_;
};

/// log cosh without overflow.
inline double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

} // namespace detail

inline SawTree build_saw_tree(const IsingInstance& inst, vertex v, const saw_options& opt) {
    detail::saw_builder b(inst, opt);
    return b.build(v);
}

inline SawTree build_saw_tree(const IsingInstance& inst, vertex v, std::size_t depth,
                              std::size_t node_cap = default_saw_node_cap) {
    if (depth < 1) throw invalid_input("self-avoiding-walk tree depth must be >= 1");
    saw_options opt;
    opt.depth = depth;
    opt.node_cap = node_cap;
    return build_saw_tree(inst, v, opt);
}

/// Root marginal P(+) of the Ising model on the tree itself: fields come from
/// phi, pinned leaves are fixed, stop leaves and depth-truncated leaves are free.
inline double tree_root_marginal(const SawTree& t, const IsingInstance& inst) {
    const auto& nodes = t.nodes;
    if (nodes.front().fixed != 0) return nodes.front().fixed > 0 ? 1.0 : 0.0;
    // Half log-ratio messages m = 1/2 log(P(+)/P(-)), accumulated bottom-up.
    std::vector<double> m(nodes.size(), 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].fixed == 0) m[i] = inst.field(nodes[i].origin).value();
    for (std::size_t i = nodes.size(); i-- > 1;) {
        const auto& x = nodes[i];
        const double b = x.coupling;
        const double contribution =
            x.fixed != 0 ? b * x.fixed : 0.5 * (detail::log_cosh(m[i] + b) - detail::log_cosh(m[i] - b));
        m[x.parent] += contribution;
    }
    return logistic(2.0 * m[0]);
}

/// P(sigma_v = + | sigma_Lambda = eta) via the complete self-avoiding-walk tree.
inline double saw_marginal(const IsingInstance& inst, vertex v, std::span<const vertex> lambda,
                           std::span<const spin> eta, std::size_t node_cap = default_saw_node_cap) {
    saw_options opt;
    opt.lambda = lambda;
    opt.eta = eta;
    opt.node_cap = node_cap;
    return tree_root_marginal(build_saw_tree(inst, v, opt), inst);
}

inline double saw_marginal(const IsingInstance& inst, vertex v, const std::vector<vertex>& lambda,
                           const std::vector<spin>& eta, std::size_t node_cap = default_saw_node_cap) {
    return saw_marginal(inst, v, std::span<const vertex>(lambda), std::span<const spin>(eta), node_cap);
}

struct SpatialMixingCert {
    vertex center = 0;
    std::size_t radius = 0;
    std::vector<vertex> boundary;
    std::vector<double> a_u;          // aligned with boundary
    std::vector<std::size_t> copies;  // terminal copies of each boundary vertex in the tree
    double total = 0.0;
    bool pass = false;
    std::size_t tree_nodes = 0;
};

inline constexpr double spatial_mixing_limit = 0.25;

/// Upper bound on the boundary influence of each u in S(v,R): the sum over
/// copies of u in the walk tree of B(v,R) of the product of tanh(beta_e) along
/// the walk.  Clamped vertices block walks.
inline SpatialMixingCert spatial_bound_a_u(const IsingInstance& inst, vertex v, std::size_t R,
                                           std::size_t node_cap = default_saw_node_cap) {
    const Ball b = ball(inst, v, R);
    SpatialMixingCert cert;
    cert.center = v;
    cert.radius = R;
    cert.boundary = b.boundary;
    cert.a_u.assign(b.boundary.size(), 0.0);
    cert.copies.assign(b.boundary.size(), 0);
    if (!inst.is_clamped(v)) {
        saw_options opt;
        opt.node_cap = node_cap;
        opt.stop = b.boundary;
        const SawTree t = build_saw_tree(inst, v, opt);
        cert.tree_nodes = t.size();
        std::vector<double> decay(t.size(), 1.0);
        for (std::size_t i = 1; i < t.size(); ++i) {
            const auto& x = t.nodes[i];
            decay[i] = decay[x.parent] * std::tanh(x.coupling);
            if (!x.stop_leaf) continue;
            const auto pos = std::lower_bound(b.boundary.begin(), b.boundary.end(), x.origin) - b.boundary.begin();
            cert.a_u[static_cast<std::size_t>(pos)] += decay[i];
            ++cert.copies[static_cast<std::size_t>(pos)];
        }
    }
    for (double a : cert.a_u) cert.total += a;
    cert.pass = cert.total <= spatial_mixing_limit;
    return cert;
}

enum class boundary_scan { exhaustive, extremal };

/// sup over boundary pairs differing only at u of
/// P(sigma_v=+ | S(v,R) = eta+) - P(sigma_v=+ | S(v,R) = eta-).
/// `extremal` only tries the other boundary spins all + or all - and is a
/// heuristic lower estimate of the supremum.
inline double exact_a_u(const IsingInstance& inst, vertex v, std::size_t R, vertex u,
                        boundary_scan mode = boundary_scan::exhaustive, std::size_t boundary_cap = 16,
                        std::size_t interior_cap = exact_caps{}.enumeration) {
    const Ball b = ball(inst, v, R);
    if (!std::binary_search(b.boundary.begin(), b.boundary.end(), u))
        throw invalid_input("vertex " + std::to_string(u) + " is not on the sphere S(v,R)");
    if (inst.is_clamped(u) || inst.is_clamped(v)) return 0.0;
    std::vector<vertex> others;
    for (vertex w : b.boundary)
        if (w != u && !inst.is_clamped(w)) others.push_back(w);
    if (others.size() + 1 > boundary_cap)
        throw size_cap_exceeded("boundary has " + std::to_string(others.size() + 1) + " free vertices, cap is " +
                                std::to_string(boundary_cap));
    std::vector<vertex> lambda(others);
    lambda.push_back(u);
    std::vector<spin> eta(lambda.size(), 1);
    const std::size_t last = others.size();
    auto gap = [&] {
        eta[last] = 1;
        const double plus = conditional_marginal(inst, v, lambda, eta, interior_cap);
        eta[last] = -1;
        const double minus = conditional_marginal(inst, v, lambda, eta, interior_cap);
        return plus - minus;
    };
    double best = 0.0;
    if (mode == boundary_scan::extremal) {
        for (spin s : {spin{1}, spin{-1}}) {
            std::fill_n(eta.begin(), last, s);
            best = std::max(best, gap());
        }
        return best;
    }
    const std::uint64_t configs = std::uint64_t{1} << others.size();
    for (std::uint64_t c = 0; c < configs; ++c) {
        for (std::size_t i = 0; i < others.size(); ++i) eta[i] = (c >> i) & 1 ? 1 : -1;
        best = std::max(best, gap());
    }
    return best;
}

} // namespace glauber
