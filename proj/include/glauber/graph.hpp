#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "glauber/errors.hpp"

namespace glauber {

using vertex = std::uint32_t;
using spin = std::int8_t; // +1 or -1; 0 means "unassigned" in partial configurations

inline constexpr vertex no_vertex = std::numeric_limits<vertex>::max();

struct edge {
    vertex u;
    vertex v;
    friend bool operator==(const edge&, const edge&) = default;
};

/// Simple undirected graph in compressed adjacency form.  Neighbor lists are
/// sorted ascending; edges are stored once with u < v.
class Graph {
public:
    Graph() = default;

    Graph(std::size_t n, std::span<const edge> edges) : n_(n) {
        edges_.reserve(edges.size());
        for (const auto& e : edges) {
            if (e.u >= n || e.v >= n)
                throw invalid_input("edge endpoint out of range: (" + std::to_string(e.u) + "," +
                                    std::to_string(e.v) + ") with n=" + std::to_string(n));
            if (e.u == e.v) throw invalid_input("self-loop at vertex " + std::to_string(e.u));
            edges_.push_back(e.u < e.v ? e : edge{e.v, e.u});
        }
        std::vector<std::size_t> order(edges_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::pair(edges_[a].u, edges_[a].v) < std::pair(edges_[b].u, edges_[b].v);
        });
        for (std::size_t i = 1; i < order.size(); ++i)
            if (edges_[order[i]] == edges_[order[i - 1]])
                throw invalid_input("duplicate edge (" + std::to_string(edges_[order[i]].u) + "," +
                                    std::to_string(edges_[order[i]].v) + ")");

        offsets_.assign(n_ + 1, 0);
        for (const auto& e : edges_) {
            ++offsets_[e.u + 1];
            ++offsets_[e.v + 1];
        }
        for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
        adjacency_.resize(offsets_[n_]);
        edge_of_slot_.resize(offsets_[n_]);
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (std::size_t id = 0; id < edges_.size(); ++id) {
            const auto& e = edges_[id];
            adjacency_[fill[e.u]] = e.v;
            edge_of_slot_[fill[e.u]++] = static_cast<std::uint32_t>(id);
            adjacency_[fill[e.v]] = e.u;
            edge_of_slot_[fill[e.v]++] = static_cast<std::uint32_t>(id);
        }
        for (std::size_t v = 0; v < n_; ++v) {
            const auto b = offsets_[v], e = offsets_[v + 1];
            std::vector<std::pair<vertex, std::uint32_t>> slots;
            slots.reserve(e - b);
            for (auto s = b; s < e; ++s) slots.emplace_back(adjacency_[s], edge_of_slot_[s]);
            std::sort(slots.begin(), slots.end());
            for (auto s = b; s < e; ++s) {
                adjacency_[s] = slots[s - b].first;
                edge_of_slot_[s] = slots[s - b].second;
            }
        }
    }

    Graph(std::size_t n, const std::vector<edge>& edges) : Graph(n, std::span<const edge>(edges)) {}

    std::size_t num_vertices() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    const std::vector<edge>& edges() const noexcept { return edges_; }

    std::span<const vertex> neighbors(vertex v) const noexcept {
        return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    /// Edge ids aligned with neighbors(v).
    std::span<const std::uint32_t> incident_edges(vertex v) const noexcept {
        return {edge_of_slot_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::size_t degree(vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

    std::size_t max_degree() const noexcept {
        std::size_t d = 0;
        for (std::size_t v = 0; v < n_; ++v) d = std::max(d, degree(static_cast<vertex>(v)));
        return d;
    }

    std::optional<std::uint32_t> edge_id(vertex u, vertex v) const noexcept {
        if (u >= n_ || v >= n_) return std::nullopt;
        const auto nb = neighbors(u);
        const auto it = std::lower_bound(nb.begin(), nb.end(), v);
        if (it == nb.end() || *it != v) return std::nullopt;
        return incident_edges(u)[static_cast<std::size_t>(it - nb.begin())];
    }
    bool has_edge(vertex u, vertex v) const noexcept { return edge_id(u, v).has_value(); }

private:
    std::size_t n_ = 0;
    std::vector<edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<vertex> adjacency_;
    std::vector<std::uint32_t> edge_of_slot_;
};

/// External field on one vertex: a finite real or a clamp to +/-.
class Field {
public:
    enum class kind : std::uint8_t { finite, plus_infinity, minus_infinity };

    constexpr Field() = default;
    static Field finite(double h) {
        if (std::isnan(h)) throw invalid_input("field is NaN");
        if (std::isinf(h)) return h > 0 ? plus_infinity() : minus_infinity();
        Field f;
        f.value_ = h;
        return f;
    }
    static constexpr Field plus_infinity() { return Field(kind::plus_infinity); }
    static constexpr Field minus_infinity() { return Field(kind::minus_infinity); }
    static constexpr Field clamp(spin s) { return s > 0 ? plus_infinity() : minus_infinity(); }

    constexpr kind type() const noexcept { return kind_; }
    constexpr bool is_clamped() const noexcept { return kind_ != kind::finite; }
    /// +1 / -1 for clamps, 0 for finite fields.
    constexpr spin clamp_sign() const noexcept {
        return kind_ == kind::plus_infinity ? 1 : kind_ == kind::minus_infinity ? -1 : 0;
    }
    /// Finite value; 0 for clamped vertices (callers must check is_clamped()).
    constexpr double value() const noexcept { return value_; }

    friend constexpr bool operator==(const Field&, const Field&) = default;

private:
    constexpr explicit Field(kind k) : kind_(k) {}
    kind kind_ = kind::finite;
    double value_ = 0.0;
};

struct weighted_edge {
    vertex u;
    vertex v;
    double beta;
};

struct vertex_field {
    vertex v;
    Field h;
};

/// Immutable ferromagnetic Ising model: graph, couplings beta_uv >= 0, fields h_v.
class IsingInstance {
public:
    IsingInstance() = default;

    IsingInstance(std::size_t n, std::span<const weighted_edge> edges, std::span<const vertex_field> fields)
        : fields_(n) {
        std::vector<edge> plain;
        plain.reserve(edges.size());
        for (const auto& e : edges) {
            if (std::isnan(e.beta) || std::isinf(e.beta))
                throw invalid_input("coupling must be finite");
            if (e.beta < 0.0)
                throw invalid_input("antiferromagnetic coupling " + std::to_string(e.beta) + " on edge (" +
                                    std::to_string(e.u) + "," + std::to_string(e.v) + ")");
            plain.push_back({e.u, e.v});
        }
        graph_ = Graph(n, plain);
        // Graph keeps input order for edge ids.
        couplings_.resize(edges.size());
        for (std::size_t i = 0; i < edges.size(); ++i) couplings_[i] = edges[i].beta;
        std::vector<bool> seen(n, false);
        for (const auto& f : fields) {
            if (f.v >= n) throw invalid_input("field vertex out of range: " + std::to_string(f.v));
            if (seen[f.v]) throw invalid_input("duplicate field for vertex " + std::to_string(f.v));
            seen[f.v] = true;
            fields_[f.v] = f.h;
        }
        finish();
    }

    IsingInstance(std::size_t n, const std::vector<weighted_edge>& edges, const std::vector<vertex_field>& fields = {})
        : IsingInstance(n, std::span<const weighted_edge>(edges), std::span<const vertex_field>(fields)) {}

    /// Uniform coupling `beta` on every edge of `g`, zero fields.
    static IsingInstance uniform(const Graph& g, double beta) {
        std::vector<weighted_edge> edges;
        edges.reserve(g.num_edges());
        for (const auto& e : g.edges()) edges.push_back({e.u, e.v, beta});
        return IsingInstance(g.num_vertices(), edges);
    }

    /// Same couplings with a replaced field vector.
    IsingInstance with_fields(std::vector<Field> fields) const {
        if (fields.size() != num_vertices()) throw invalid_input("field vector has wrong length");
        IsingInstance copy = *this;
        copy.fields_ = std::move(fields);
        copy.finish();
        return copy;
    }

    const Graph& graph() const noexcept { return graph_; }
    std::size_t num_vertices() const noexcept { return graph_.num_vertices(); }
    double beta_max() const noexcept { return beta_max_; }

    double coupling(std::uint32_t edge_id) const noexcept { return couplings_[edge_id]; }
    double coupling(vertex u, vertex v) const {
        const auto id = graph_.edge_id(u, v);
        if (!id) throw invalid_input("no edge between " + std::to_string(u) + " and " + std::to_string(v));
        return couplings_[*id];
    }
    /// Couplings aligned with graph().neighbors(v).
    std::span<const double> neighbor_couplings(vertex v) const noexcept {
        return {slot_couplings_.data() + slot_offset_[v], graph_.degree(v)};
    }

    const Field& field(vertex v) const noexcept { return fields_[v]; }
    const std::vector<Field>& fields() const noexcept { return fields_; }
    bool is_clamped(vertex v) const noexcept { return fields_[v].is_clamped(); }
    const std::vector<vertex>& free_vertices() const noexcept { return free_; }

    std::vector<weighted_edge> weighted_edges() const {
        std::vector<weighted_edge> out;
        out.reserve(couplings_.size());
        for (std::size_t i = 0; i < couplings_.size(); ++i)
            out.push_back({graph_.edges()[i].u, graph_.edges()[i].v, couplings_[i]});
        return out;
    }

private:
    void finish() {
        const std::size_t n = graph_.num_vertices();
        if (fields_.size() != n) fields_.resize(n);
        beta_max_ = 0.0;
        for (double b : couplings_) beta_max_ = std::max(beta_max_, b);
        slot_offset_.assign(n + 1, 0);
        slot_couplings_.clear();
        for (std::size_t v = 0; v < n; ++v) {
            slot_offset_[v] = slot_couplings_.size();
            for (auto id : graph_.incident_edges(static_cast<vertex>(v))) slot_couplings_.push_back(couplings_[id]);
        }
        slot_offset_[n] = slot_couplings_.size();
        free_.clear();
        for (std::size_t v = 0; v < n; ++v)
            if (!fields_[v].is_clamped()) free_.push_back(static_cast<vertex>(v));
    }

    Graph graph_;
    std::vector<double> couplings_;
    std::vector<Field> fields_;
    std::vector<std::size_t> slot_offset_;
    std::vector<double> slot_couplings_;
    std::vector<vertex> free_;
    double beta_max_ = 0.0;
};

inline IsingInstance build_instance(std::size_t n, const std::vector<weighted_edge>& edges,
                                    const std::vector<vertex_field>& fields = {}) {
    return IsingInstance(n, edges, fields);
}

/// B(v,R) split into its interior B(v,R-1) and sphere S(v,R).
struct Ball {
    vertex center = 0;
    std::size_t radius = 0;
    std::vector<vertex> interior; // sorted
    std::vector<vertex> boundary; // sorted
    std::size_t volume = 0;
    long tree_excess = 0;

    std::vector<vertex> vertices() const {
        std::vector<vertex> all(interior);
        all.insert(all.end(), boundary.begin(), boundary.end());
        std::sort(all.begin(), all.end());
        return all;
    }
};

/// Graph distances from `source` truncated at `max_depth` (unreached = no_vertex).
inline std::vector<vertex> bfs_distances(const Graph& g, vertex source, std::size_t max_depth) {
    std::vector<vertex> dist(g.num_vertices(), no_vertex);
    std::vector<vertex> frontier{source}, next;
    dist[source] = 0;
    for (std::size_t depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
        next.clear();
        for (vertex u : frontier)
            for (vertex w : g.neighbors(u))
                if (dist[w] == no_vertex) {
                    dist[w] = static_cast<vertex>(depth + 1);
                    next.push_back(w);
                }
        frontier.swap(next);
    }
    return dist;
}

/// Number of edges of `g` with both endpoints in `members` (a membership mask).
inline std::size_t induced_edge_count(const Graph& g, const std::vector<bool>& members) {
    std::size_t m = 0;
    for (const auto& e : g.edges())
        if (members[e.u] && members[e.v]) ++m;
    return m;
}

inline Ball ball(const Graph& g, vertex v, std::size_t radius) {
    if (radius < 1) throw invalid_input("ball radius must be >= 1");
    if (v >= g.num_vertices()) throw invalid_input("ball center out of range");
    const auto dist = bfs_distances(g, v, radius);
    Ball b;
    b.center = v;
    b.radius = radius;
    std::vector<bool> inside(g.num_vertices(), false);
    for (std::size_t u = 0; u < dist.size(); ++u) {
        if (dist[u] == no_vertex) continue;
        inside[u] = true;
        (dist[u] < radius ? b.interior : b.boundary).push_back(static_cast<vertex>(u));
    }
    b.volume = b.interior.size() + b.boundary.size();
    b.tree_excess = static_cast<long>(induced_edge_count(g, inside)) - static_cast<long>(b.volume) + 1;
    return b;
}

inline Ball ball(const IsingInstance& inst, vertex v, std::size_t radius) { return ball(inst.graph(), v, radius); }

/// Induced subgraph on `vertices` with local labels in the given order.
struct Subgraph {
    Graph graph;
    std::vector<vertex> to_global;
};

inline Subgraph induced_subgraph(const Graph& g, std::span<const vertex> vertices) {
    std::vector<vertex> local(g.num_vertices(), no_vertex);
    for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<vertex>(i);
    std::vector<edge> edges;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (vertex w : g.neighbors(vertices[i]))
            if (local[w] != no_vertex && local[w] > i) edges.push_back({static_cast<vertex>(i), local[w]});
    return {Graph(vertices.size(), edges), std::vector<vertex>(vertices.begin(), vertices.end())};
}

struct SpanningTree {
    Graph tree;                  // local labels; root is 0
    std::vector<vertex> to_global;
    std::vector<vertex> level;   // BFS level of each local vertex
    std::size_t unexplored_edges = 0;
};

/// Ordered BFS spanning tree of B(v,R): process S(v,0), S(v,1), ..., S(v,R-1)
/// in ascending vertex order, attaching every neighbor not yet in the tree.
inline SpanningTree spanning_tree_bfs(const Graph& g, const Ball& b) {
    std::vector<vertex> local(g.num_vertices(), no_vertex);
    SpanningTree st;
    std::vector<edge> tree_edges;
    auto attach = [&](vertex w, vertex lvl) {
        local[w] = static_cast<vertex>(st.to_global.size());
        st.to_global.push_back(w);
        st.level.push_back(lvl);
    };
    attach(b.center, 0);
    std::vector<vertex> layer{b.center};
    for (std::size_t depth = 0; depth < b.radius && !layer.empty(); ++depth) {
        std::sort(layer.begin(), layer.end());
        std::vector<vertex> next;
        for (vertex u : layer)
            for (vertex w : g.neighbors(u))
                if (local[w] == no_vertex) {
                    attach(w, static_cast<vertex>(depth + 1));
                    tree_edges.push_back({local[u], local[w]});
                    next.push_back(w);
                }
        layer.swap(next);
    }
    st.tree = Graph(st.to_global.size(), tree_edges);
    std::vector<bool> inside(g.num_vertices(), false);
    for (vertex w : st.to_global) inside[w] = true;
    st.unexplored_edges = induced_edge_count(g, inside) - tree_edges.size();
    return st;
}

inline SpanningTree spanning_tree_bfs(const IsingInstance& inst, const Ball& b) {
    return spanning_tree_bfs(inst.graph(), b);
}

/// Connected components as a label per vertex; returns the component count.
inline std::size_t connected_components(const Graph& g, std::vector<vertex>& label) {
    label.assign(g.num_vertices(), no_vertex);
    std::size_t count = 0;
    std::vector<vertex> stack;
    for (std::size_t s = 0; s < g.num_vertices(); ++s) {
        if (label[s] != no_vertex) continue;
        label[s] = static_cast<vertex>(count);
        stack.push_back(static_cast<vertex>(s));
        while (!stack.empty()) {
            const vertex u = stack.back();
            stack.pop_back();
            for (vertex w : g.neighbors(u))
                if (label[w] == no_vertex) {
                    label[w] = static_cast<vertex>(count);
                    stack.push_back(w);
                }
        }
        ++count;
    }
    return count;
}

inline bool is_connected(const Graph& g) {
    std::vector<vertex> label;
    return g.num_vertices() <= 1 || connected_components(g, label) == 1;
}

inline bool is_forest(const Graph& g) {
    std::vector<vertex> label;
    const auto c = connected_components(g, label);
    return g.num_edges() + c == g.num_vertices();
}

} // namespace glauber
