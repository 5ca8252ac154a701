#pragma once

// Random and deterministic graph families.  Every random generator is a pure
// function of (parameters, seed).

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "glauber/errors.hpp"
#include "glauber/graph.hpp"
#include "glauber/rng.hpp"

namespace glauber {

/// G(n, d/n): every pair present independently with probability p = d/n.
/// Uses geometric skipping over the pair sequence, so cost is O(n + m).
inline Graph gen_erdos_renyi(std::size_t n, double d, std::uint64_t seed, std::uint32_t replica = 0) {
    if (!(d > 0.0) || d > static_cast<double>(n))
        throw invalid_input("Erdos-Renyi mean degree must satisfy 0 < d <= n");
    const double p = d / static_cast<double>(n);
    std::vector<edge> edges;
    if (p >= 1.0) {
        for (vertex v = 1; v < n; ++v)
            for (vertex w = 0; w < v; ++w) edges.push_back({w, v});
        return Graph(n, edges);
    }
    philox_stream rng(seed, stream_tag::graph, replica);
    const double log_q = std::log1p(-p);
    std::int64_t v = 1, w = -1;
    const auto nn = static_cast<std::int64_t>(n);
    while (v < nn) {
        w += 1 + static_cast<std::int64_t>(std::floor(std::log(rng.uniform()) / log_q));
        while (w >= v && v < nn) {
            w -= v;
            ++v;
        }
        if (v < nn) edges.push_back({static_cast<vertex>(w), static_cast<vertex>(v)});
    }
    return Graph(n, edges);
}

/// Uniform simple d-regular graph via the pairing model, rejecting any pairing
/// that produces a loop or a multi-edge.
inline Graph gen_random_regular(std::size_t n, std::size_t d, std::uint64_t seed, std::uint32_t replica = 0,
                                std::size_t max_attempts = 1'000'000) {
    if ((n * d) % 2 != 0) throw invalid_input("random regular graph needs n*d even");
    if (d >= n) throw invalid_input("random regular graph needs d < n");
    if (d == 0) return Graph(n, std::vector<edge>{});
    philox_stream rng(seed, stream_tag::graph, replica);
    std::vector<vertex> points(n * d);
    std::vector<edge> edges;
    std::vector<std::vector<vertex>> adj(n);
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<vertex>(i / d);
        edges.clear();
        for (auto& a : adj) a.clear();
        bool ok = true;
        // Pair the last unpaired point with a uniformly chosen remaining one.
        for (std::size_t remaining = points.size(); remaining > 0 && ok; remaining -= 2) {
            const vertex a = points[remaining - 1];
            const std::size_t j = rng.below(remaining - 1);
            const vertex b = points[j];
            points[j] = points[remaining - 2];
            if (a == b) {
                ok = false;
                break;
            }
            for (vertex x : adj[a])
                if (x == b) ok = false;
            if (!ok) break;
            adj[a].push_back(b);
            adj[b].push_back(a);
            edges.push_back({a, b});
        }
        if (ok) return Graph(n, edges);
    }
    throw size_cap_exceeded("random regular pairing rejected " + std::to_string(max_attempts) + " times");
}

/// Rooted tree with per-vertex level; root is vertex 0.
struct RootedTree {
    Graph graph;
    vertex root = 0;
    std::vector<std::uint32_t> level;
    std::vector<vertex> parent; // parent[root] == no_vertex
};

/// First `depth` levels of a Galton-Watson tree with Poisson(d) offspring.
/// Vertices are labeled in breadth-first order.
inline RootedTree gen_galton_watson_poisson(double d, std::size_t depth, std::uint64_t seed,
                                            std::uint32_t replica = 0, std::size_t node_cap = 50'000'000) {
    if (!(d > 0.0)) throw invalid_input("Galton-Watson mean offspring must be positive");
    philox_stream rng(seed, stream_tag::branching, replica);
    std::poisson_distribution<std::uint32_t> offspring(d);
    RootedTree t;
    t.level.push_back(0);
    t.parent.push_back(no_vertex);
    std::vector<edge> edges;
    std::size_t level_begin = 0;
    for (std::size_t lvl = 0; lvl < depth; ++lvl) {
        const std::size_t level_end = t.level.size();
        if (level_begin == level_end) break;
        for (std::size_t u = level_begin; u < level_end; ++u) {
            const std::uint32_t k = offspring(rng);
            if (t.level.size() + k > node_cap)
                throw size_cap_exceeded("Galton-Watson tree exceeds node cap " + std::to_string(node_cap));
            for (std::uint32_t c = 0; c < k; ++c) {
                const auto child = static_cast<vertex>(t.level.size());
                t.level.push_back(static_cast<std::uint32_t>(lvl + 1));
                t.parent.push_back(static_cast<vertex>(u));
                edges.push_back({static_cast<vertex>(u), child});
            }
        }
        level_begin = level_end;
    }
    t.graph = Graph(t.level.size(), edges);
    return t;
}

inline Graph gen_path(std::size_t n) {
    std::vector<edge> edges;
    for (vertex v = 1; v < n; ++v) edges.push_back({v - 1, v});
    return Graph(n, edges);
}

inline Graph gen_cycle(std::size_t n) {
    if (n < 3) throw invalid_input("cycle needs n >= 3");
    std::vector<edge> edges;
    for (vertex v = 0; v < n; ++v) edges.push_back({v, static_cast<vertex>((v + 1) % n)});
    return Graph(n, edges);
}

/// Star K_{1,k}: center 0, leaves 1..k.
inline Graph gen_star(std::size_t leaves) {
    std::vector<edge> edges;
    for (vertex v = 1; v <= leaves; ++v) edges.push_back({0, v});
    return Graph(leaves + 1, edges);
}

inline Graph gen_complete(std::size_t n) {
    std::vector<edge> edges;
    for (vertex u = 0; u < n; ++u)
        for (vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph(n, edges);
}

inline Graph gen_grid(std::size_t rows, std::size_t cols) {
    std::vector<edge> edges;
    auto id = [cols](std::size_t r, std::size_t c) { return static_cast<vertex>(r * cols + c); };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
            if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
        }
    return Graph(rows * cols, edges);
}

} // namespace glauber
