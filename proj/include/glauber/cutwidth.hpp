#pragma once

// Cut-width: exact subset DP, the recursive tree ordering bound, Galton-Watson
// statistics, the order-statistic variable W, and the cut-width based
// relaxation and mixing bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "glauber/errors.hpp"
#include "glauber/generators.hpp"
#include "glauber/graph.hpp"
#include "glauber/parallel.hpp"
#include "glauber/rng.hpp"
#include "glauber/stats.hpp"

namespace glauber {

enum class cutwidth_kind { exact, tree_bound };

inline const char* to_string(cutwidth_kind k) { return k == cutwidth_kind::exact ? "exact" : "tree_bound"; }

struct CutwidthResult {
    std::size_t value = 0;
    std::vector<vertex> ordering;
    cutwidth_kind kind = cutwidth_kind::exact;
};

/// Largest number of edges crossing a prefix cut of `ordering`.
inline std::size_t ordering_width(const Graph& g, const std::vector<vertex>& ordering) {
    if (ordering.size() != g.num_vertices()) throw invalid_input("ordering is not a permutation");
    std::vector<std::size_t> pos(g.num_vertices(), g.num_vertices());
    for (std::size_t i = 0; i < ordering.size(); ++i) {
        if (ordering[i] >= g.num_vertices() || pos[ordering[i]] != g.num_vertices())
            throw invalid_input("ordering is not a permutation");
        pos[ordering[i]] = i;
    }
    // diff[i] counts edges that start crossing after position i and stop at their later end.
    std::vector<long> diff(g.num_vertices() + 1, 0);
    for (const auto& e : g.edges()) {
        const auto a = std::min(pos[e.u], pos[e.v]), b = std::max(pos[e.u], pos[e.v]);
        ++diff[a];
        --diff[b];
    }
    long running = 0, best = 0;
    for (std::size_t i = 0; i < g.num_vertices(); ++i) {
        running += diff[i];
        best = std::max(best, running);
    }
    return static_cast<std::size_t>(best);
}

inline constexpr std::size_t cutwidth_exact_cap = 20;

/// Exact cut-width by dynamic programming over placed prefixes:
/// cw(S) = max(cut(S), min_{v in S} cw(S \ v)).
inline CutwidthResult cutwidth_exact(const Graph& g, std::size_t cap = cutwidth_exact_cap) {
    const std::size_t n = g.num_vertices();
    if (n > cap || n > 24)
        throw size_cap_exceeded("exact cut-width needs n <= " + std::to_string(std::min<std::size_t>(cap, 24)) +
                                ", got " + std::to_string(n));
    CutwidthResult r;
    r.kind = cutwidth_kind::exact;
    if (n == 0) return r;
    std::vector<std::uint32_t> nbr(n, 0);
    for (const auto& e : g.edges()) {
        nbr[e.u] |= std::uint32_t{1} << e.v;
        nbr[e.v] |= std::uint32_t{1} << e.u;
    }
    const std::size_t full = std::size_t{1} << n;
    std::vector<std::uint16_t> cut(full, 0), cw(full, 0);
    for (std::size_t S = 1; S < full; ++S) {
        const auto v = static_cast<std::size_t>(__builtin_ctzll(S));
        const std::size_t rest = S & (S - 1);
        const auto inside = static_cast<std::uint16_t>(__builtin_popcount(nbr[v] & static_cast<std::uint32_t>(rest)));
        cut[S] = static_cast<std::uint16_t>(cut[rest] + g.degree(static_cast<vertex>(v)) - 2 * inside);
        std::uint16_t best = UINT16_MAX;
        for (std::size_t T = S; T; T &= T - 1) best = std::min(best, cw[S & ~(T & (~T + 1))]);
        cw[S] = std::max(best, cut[S]);
    }
    r.value = cw[full - 1];
    // Peel vertices off the end; among optimal choices take the smallest index.
    std::vector<vertex> reversed;
    std::size_t S = full - 1;
    while (S) {
        for (std::size_t v = 0; v < n; ++v) {
            if (!((S >> v) & 1)) continue;
            const std::size_t prev = S & ~(std::size_t{1} << v);
            if (std::max(cw[prev], cut[S]) == cw[S]) {
                reversed.push_back(static_cast<vertex>(v));
                S = prev;
                break;
            }
        }
    }
    r.ordering.assign(reversed.rbegin(), reversed.rend());
    return r;
}

/// Recursive tree ordering: each root is followed by its subtrees' orderings,
/// subtrees sorted by descending recursive bound b_1 >= ... >= b_k, and the
/// bound at the root is max_i (b_i + k + 1 - i) (0 for a leaf).  Components of
/// a forest are rooted at their smallest vertex unless `root` is given.
inline CutwidthResult tree_cutwidth_ordering(const Graph& t, vertex root = no_vertex) {
    if (!is_forest(t)) throw invalid_input("tree cut-width ordering needs an acyclic graph");
    const std::size_t n = t.num_vertices();
    CutwidthResult r;
    r.kind = cutwidth_kind::tree_bound;
    std::vector<vertex> parent(n, no_vertex), order;
    std::vector<bool> seen(n, false);
    std::vector<vertex> roots;
    auto explore = [&](vertex s) {
        roots.push_back(s);
        seen[s] = true;
        const std::size_t begin = order.size();
        order.push_back(s);
        for (std::size_t i = begin; i < order.size(); ++i)
            for (vertex w : t.neighbors(order[i]))
                if (!seen[w]) {
                    seen[w] = true;
                    parent[w] = order[i];
                    order.push_back(w);
                }
    };
    if (root != no_vertex) {
        if (root >= n) throw invalid_input("root out of range");
        explore(root);
    }
    for (vertex s = 0; s < n; ++s)
        if (!seen[s]) explore(s);

    std::vector<std::vector<vertex>> children(n);
    for (vertex v : order)
        if (parent[v] != no_vertex) children[parent[v]].push_back(v);
    std::vector<std::size_t> bound(n, 0);
    for (std::size_t i = order.size(); i-- > 0;) {
        const vertex v = order[i];
        auto& ch = children[v];
        std::sort(ch.begin(), ch.end(), [&](vertex a, vertex b) {
            return bound[a] != bound[b] ? bound[a] > bound[b] : a < b;
        });
        const std::size_t k = ch.size();
        for (std::size_t j = 0; j < k; ++j) bound[v] = std::max(bound[v], bound[ch[j]] + k - j); // i = j+1
    }
    std::vector<vertex> stack;
    for (auto it = roots.rbegin(); it != roots.rend(); ++it) stack.push_back(*it);
    while (!stack.empty()) {
        const vertex v = stack.back();
        stack.pop_back();
        r.ordering.push_back(v);
        for (auto it = children[v].rbegin(); it != children[v].rend(); ++it) stack.push_back(*it);
    }
    for (vertex s : roots) r.value = std::max(r.value, bound[s]);
    return r;
}

inline CutwidthResult tree_cutwidth_ordering(const RootedTree& t) { return tree_cutwidth_ordering(t.graph, t.root); }

struct GwCutwidthStats {
    double d = 0.0;
    std::size_t depth = 0;
    std::vector<std::size_t> tree_bound;  // per sample
    std::vector<long> exact;              // per sample; -1 where not computed
    std::vector<std::size_t> sizes;
    double mean_bound = 0.0;
    std::size_t exact_mismatches = 0;     // samples where tree_bound < exact (must stay 0)
};

/// Tree-ordering bound on the cut-width of `samples` Poisson(d) Galton-Watson
/// trees of the given depth; exact values where the tree has at most
/// `exact_cap` vertices.
inline GwCutwidthStats gw_cutwidth_stats(double d, std::size_t depth, std::size_t samples, std::uint64_t seed,
                                         std::size_t threads = 1, std::size_t exact_cap = 16) {
    if (samples < 100) throw invalid_input("Galton-Watson cut-width statistics need at least 100 samples");
    GwCutwidthStats s;
    s.d = d;
    s.depth = depth;
    s.tree_bound.resize(samples);
    s.exact.assign(samples, -1);
    s.sizes.resize(samples);
    // The replica index mixes depth and sample so that different depths draw
    // independent trees.
    parallel_for(samples, threads, [&](std::size_t i) {
        const auto tree = gen_galton_watson_poisson(d, depth, seed, static_cast<std::uint32_t>((depth << 24) | i));
        s.sizes[i] = tree.graph.num_vertices();
        s.tree_bound[i] = tree_cutwidth_ordering(tree).value;
        if (tree.graph.num_vertices() <= exact_cap) s.exact[i] = static_cast<long>(cutwidth_exact(tree.graph).value);
    });
    double total = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        total += static_cast<double>(s.tree_bound[i]);
        if (s.exact[i] >= 0 && static_cast<long>(s.tree_bound[i]) < s.exact[i]) ++s.exact_mismatches;
    }
    s.mean_bound = total / static_cast<double>(samples);
    return s;
}

/// Samples of W = X + max_{1<=i<=X} (Y_(i) - i) with X, Y_i ~ Po(d) i.i.d. and
/// Y_(1) >= Y_(2) >= ... ; W = 0 when X = 0.
inline std::vector<long> order_stat_bound_sample(double d, std::size_t samples, std::uint64_t seed) {
    if (samples < 10'000) throw invalid_input("order-statistic sampling needs at least 10^4 samples");
    if (!(d > 0.0)) throw invalid_input("Poisson mean must be positive");
    philox_stream rng(seed, stream_tag::order_statistics, 0);
    std::poisson_distribution<long> po(d);
    std::vector<long> w(samples);
    std::vector<long> y;
    for (auto& out : w) {
        const long x = po(rng);
        if (x == 0) {
            out = 0;
            continue;
        }
        y.resize(static_cast<std::size_t>(x));
        for (auto& yi : y) yi = po(rng);
        std::sort(y.begin(), y.end(), std::greater<>());
        long best = y[0] - 1;
        for (std::size_t i = 1; i < y.size(); ++i) best = std::max(best, y[i] - static_cast<long>(i + 1));
        out = x + best;
    }
    return w;
}

struct TailCheck {
    long shift = 0;            // calibrated integer shift
    long q_max = 0;
    double worst_excess = 0.0; // max over q of P_hat - P(Po >= q) - 2 * half-width (<= 0 passes)
    bool pass = false;
};

/// Largest excess of the empirical tail over the Poisson tail at shift `c`:
/// max_q [ P_hat(V >= c + q) - P(Po(d) >= q) - 2 * Wilson half-width ].
inline double tail_excess(const std::vector<long>& values, double d, double c, long q_max) {
    double worst = -HUGE_VAL;
    for (long q = 0; q <= q_max; ++q) {
        const double threshold = c + static_cast<double>(q);
        std::uint64_t hits = 0;
        for (long v : values) hits += static_cast<double>(v) >= threshold;
        const auto ci = wilson_interval(hits, values.size());
        worst = std::max(worst, ci.estimate - poisson_upper_tail(d, q) - 2.0 * ci.half_width());
    }
    return worst;
}

/// Smallest integer C >= 0 with P_hat(V >= C + q) <= P(Po(d) >= q) + 2 CI for all q <= q_max.
inline TailCheck calibrate_shift(const std::vector<long>& values, double d, long q_max, long c_limit = 1000) {
    TailCheck t;
    t.q_max = q_max;
    for (long c = 0; c <= c_limit; ++c) {
        const double e = tail_excess(values, d, static_cast<double>(c), q_max);
        if (e <= 0) {
            t.shift = c;
            t.worst_excess = e;
            t.pass = true;
            return t;
        }
    }
    t.shift = c_limit;
    return t;
}

/// Smallest integer C' >= 0 such that, at every depth l, the empirical tail of
/// the cut-width sample satisfies P_hat(E >= C' l + q) <= P(Po(d) >= q) + 2 CI.
inline TailCheck calibrate_depth_shift(const std::vector<std::vector<long>>& by_depth,
                                       const std::vector<std::size_t>& depths, double d, long q_max,
                                       long c_limit = 1000) {
    TailCheck t;
    t.q_max = q_max;
    for (long c = 0; c <= c_limit; ++c) {
        double worst = -HUGE_VAL;
        for (std::size_t i = 0; i < depths.size(); ++i)
            worst = std::max(worst, tail_excess(by_depth[i], d, static_cast<double>(c * static_cast<long>(depths[i])), q_max));
        if (worst <= 0) {
            t.shift = c;
            t.worst_excess = worst;
            t.pass = true;
            return t;
        }
    }
    t.shift = c_limit;
    return t;
}

inline void check_bound_args(double n, double beta, double E, double d) {
    if (!(n >= 0) || !(beta >= 0) || !(E >= 0) || !(d >= 0))
        throw invalid_input("cut-width bound arguments must be nonnegative");
}

/// n^2 exp(4 beta (E + d)): relaxation time bound for the discrete-time chain.
inline double relaxation_bound(double n, double beta, double E, double d) {
    check_bound_args(n, beta, E, d);
    return n * n * std::exp(4.0 * beta * (E + d));
}

/// 80 n^3 exp(5 beta (E + d)): mixing time bound.
inline double mixing_bound_cutwidth(double n, double beta, double E, double d) {
    check_bound_args(n, beta, E, d);
    return 80.0 * n * n * n * std::exp(5.0 * beta * (E + d));
}

inline double log_mixing_bound_cutwidth(double n, double beta, double E, double d) {
    check_bound_args(n, beta, E, d);
    return std::log(80.0) + 3.0 * std::log(n) + 5.0 * beta * (E + d);
}

} // namespace glauber
