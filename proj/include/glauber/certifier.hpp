#pragma once

// Volume / local-mixing / spatial-mixing conditions on balls B(v,R) and the
// mixing-time and spectral-gap bounds they certify.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glauber/cutwidth.hpp"
#include "glauber/dynamics.hpp"
#include "glauber/errors.hpp"
#include "glauber/exact.hpp"
#include "glauber/graph.hpp"
#include "glauber/parallel.hpp"
#include "glauber/saw.hpp"

namespace glauber {

inline bool threshold_check(double d, double beta) {
    if (!(d >= 1) || !(beta >= 0)) throw invalid_input("threshold check needs d >= 1 and beta >= 0");
    return (d - 1.0) * std::tanh(beta) < 1.0;
}

/// d (d-1)^{R-1} tanh^R(beta) / (1 - (d-1) tanh beta): the walk-count bound on
/// the boundary influence at radius R in a graph of maximum degree d.
inline double tree_influence_bound(double d, double beta, std::size_t R) {
    const double t = std::tanh(beta);
    const double denom = 1.0 - (d - 1.0) * t;
    if (!(denom > 0)) return HUGE_VAL;
    if (t == 0.0) return 0.0;
    if (d <= 1.0) return R == 1 ? d * t : 0.0;
    const double log_num =
        std::log(d) + (static_cast<double>(R) - 1.0) * std::log(d - 1.0) + static_cast<double>(R) * std::log(t);
    return std::exp(log_num) / denom;
}

/// Smallest R >= 1 with tree_influence_bound(d, beta, R) <= 1/4.
inline std::size_t main_threshold_radius(double d, double beta, std::size_t max_radius = 1'000'000) {
    if (!threshold_check(d, beta))
        throw invalid_input("(d-1) tanh(beta) >= 1: no radius makes the boundary influence small");
    for (std::size_t R = 1; R <= max_radius; ++R)
        if (tree_influence_bound(d, beta, R) <= spatial_mixing_limit) return R;
    throw size_cap_exceeded("radius search exceeded " + std::to_string(max_radius));
}

struct Theorem1Constants {
    std::size_t R = 0;
    double X = 0.0;     // volume bound 1 + d sum_{l=1}^R (d-1)^{l-1}
    double log_T = 0.0; // log of 80 d^3 X^3 exp(5 beta d (X+1))
    double T = 0.0;     // exp(log_T); +inf when it overflows
};

inline double volume_bound(double d, std::size_t R) {
    double s = 0.0, p = 1.0;
    for (std::size_t l = 1; l <= R; ++l) {
        s += p;
        p *= d - 1.0;
    }
    return 1.0 + d * s;
}

inline Theorem1Constants theorem1_constants(double d, double beta) {
    Theorem1Constants c;
    c.R = main_threshold_radius(d, beta);
    c.X = volume_bound(d, c.R);
    c.log_T = std::log(80.0) + 3.0 * std::log(d) + 3.0 * std::log(c.X) + 5.0 * beta * d * (c.X + 1.0);
    c.T = std::exp(c.log_T);
    return c;
}

enum class lm_mode { exact, exact_extremal, cutwidth_bound };

inline const char* to_string(lm_mode m) {
    switch (m) {
    case lm_mode::exact: return "exact";
    case lm_mode::exact_extremal: return "exact_extremal";
    default: return "cutwidth_bound";
    }
}

struct certify_options {
    std::size_t R = 1;
    lm_mode lm = lm_mode::exact;
    std::optional<double> X;     // volume bound; default: largest ball volume
    std::optional<double> log_T; // log local-mixing bound; default: largest per-vertex value
    std::size_t interior_cap = exact_caps{}.matrix;
    std::size_t boundary_cap = 12;
    std::size_t saw_node_cap = default_saw_node_cap;
    std::size_t threads = 1;
    bool full_report = true; // false: stop at the first failing vertex
};

struct VertexConditions {
    vertex v = 0;
    bool evaluated = false;
    std::size_t volume = 0;
    long tree_excess = 0;
    bool vol = false;
    double log_lm_time = -HUGE_VAL; // log of the local mixing time (or its bound)
    bool lm = false;
    double sum_a_u = 0.0;
    bool sm = false;
    std::size_t max_copies = 0;
    std::size_t boundary_configs = 0;

    bool pass() const noexcept { return evaluated && vol && lm && sm; }
};

struct ConditionReport {
    std::size_t R = 0;
    lm_mode mode = lm_mode::exact;
    double X = 0.0;
    double log_T = 0.0;
    std::vector<VertexConditions> per_vertex;
    bool all_pass = false;
    bool heuristic = false; // the extremal-boundary shortcut was used
    std::string failure;
};

/// Continuous-time mixing time of the dynamics on the free interior of
/// B(v,R-1) with boundary spins `fixed`.
inline double local_mixing_time(const IsingInstance& inst, const std::vector<vertex>& interior_free,
                                const std::vector<spin>& fixed) {
    if (interior_free.empty()) return 0.0;
    const auto m = restrict_model(inst, interior_free, fixed, interior_free.size());
    TransitionSpectrum t;
    t.selection_size = m.selection_size;
    t.kernel = heat_bath_kernel(m);
    return exact_continuous_mixing_time(t, exact_distribution(m));
}

namespace detail {

inline VertexConditions check_vertex(const IsingInstance& inst, vertex v, const certify_options& opt) {
    VertexConditions c;
    c.v = v;
    c.evaluated = true;
    const Ball b = ball(inst, v, opt.R);
    c.volume = b.volume;
    c.tree_excess = b.tree_excess;

    const auto cert = spatial_bound_a_u(inst, v, opt.R, opt.saw_node_cap);
    c.sum_a_u = cert.total;
    c.sm = cert.pass;
    for (auto k : cert.copies) c.max_copies = std::max(c.max_copies, k);
    if (c.tree_excess <= 1 && c.max_copies > 2)
        throw std::logic_error("ball with tree excess <= 1 has a boundary vertex with more than two walk copies");

    std::vector<vertex> interior_free, boundary_free;
    for (vertex u : b.interior)
        if (!inst.is_clamped(u)) interior_free.push_back(u);
    for (vertex u : b.boundary)
        if (!inst.is_clamped(u)) boundary_free.push_back(u);

    if (opt.lm == lm_mode::cutwidth_bound) {
        const Subgraph sub = induced_subgraph(inst.graph(), b.interior);
        const double nb = static_cast<double>(b.interior.size());
        const double E = b.interior.size() <= cutwidth_exact_cap ? static_cast<double>(cutwidth_exact(sub.graph).value) : nb;
        c.log_lm_time = log_mixing_bound_cutwidth(nb, inst.beta_max(), E, static_cast<double>(inst.graph().max_degree()));
        return c;
    }
    if (interior_free.size() > opt.interior_cap)
        throw size_cap_exceeded("ball interior at vertex " + std::to_string(v) + " has " +
                                std::to_string(interior_free.size()) + " free vertices, cap is " +
                                std::to_string(opt.interior_cap));
    std::vector<spin> fixed(inst.num_vertices(), 0);
    double worst = 0.0;
    if (opt.lm == lm_mode::exact_extremal) {
        for (spin s : {spin{1}, spin{-1}}) {
            for (vertex u : boundary_free) fixed[u] = s;
            worst = std::max(worst, local_mixing_time(inst, interior_free, fixed));
            ++c.boundary_configs;
        }
    } else {
        if (boundary_free.size() > opt.boundary_cap)
            throw size_cap_exceeded("sphere at vertex " + std::to_string(v) + " has " +
                                    std::to_string(boundary_free.size()) + " free vertices, cap is " +
                                    std::to_string(opt.boundary_cap));
        const std::uint64_t configs = std::uint64_t{1} << boundary_free.size();
        for (std::uint64_t cfg = 0; cfg < configs; ++cfg) {
            for (std::size_t i = 0; i < boundary_free.size(); ++i) fixed[boundary_free[i]] = (cfg >> i) & 1 ? 1 : -1;
            worst = std::max(worst, local_mixing_time(inst, interior_free, fixed));
            ++c.boundary_configs;
        }
    }
    c.log_lm_time = worst > 0 ? std::log(worst) : -HUGE_VAL;
    return c;
}

} // namespace detail

/// Evaluates the three conditions at every vertex.  Unless given, X is the
/// largest ball volume and T the largest local mixing time, both at least 1.
inline ConditionReport verify_conditions(const IsingInstance& inst, const certify_options& opt) {
    if (opt.R < 1) throw invalid_input("radius must be >= 1");
    const std::size_t n = inst.num_vertices();
    ConditionReport r;
    r.R = opt.R;
    r.mode = opt.lm;
    r.heuristic = opt.lm == lm_mode::exact_extremal;
    r.per_vertex.resize(n);
    if (opt.full_report) {
        parallel_for(n, opt.threads, [&](std::size_t v) {
            r.per_vertex[v] = detail::check_vertex(inst, static_cast<vertex>(v), opt);
        });
    } else {
        for (std::size_t v = 0; v < n; ++v) {
            r.per_vertex[v] = detail::check_vertex(inst, static_cast<vertex>(v), opt);
            if (!r.per_vertex[v].sm) break;
        }
    }
    double max_volume = 1.0, max_log_lm = 0.0;
    for (const auto& c : r.per_vertex) {
        if (!c.evaluated) continue;
        max_volume = std::max(max_volume, static_cast<double>(c.volume));
        max_log_lm = std::max(max_log_lm, c.log_lm_time);
    }
    r.X = opt.X.value_or(max_volume);
    r.log_T = opt.log_T.value_or(max_log_lm);
    r.all_pass = n > 0;
    for (auto& c : r.per_vertex) {
        if (!c.evaluated) {
            r.all_pass = false;
            continue;
        }
        c.vol = static_cast<double>(c.volume) <= r.X;
        c.lm = c.log_lm_time <= r.log_T;
        if (!c.pass() && r.failure.empty()) {
            r.failure = "vertex " + std::to_string(c.v) + " fails" + (c.vol ? "" : " volume") +
                        (c.lm ? "" : " local-mixing") + (c.sm ? "" : " spatial-mixing") + " condition";
        }
        r.all_pass = r.all_pass && c.pass();
    }
    if (n == 0) r.failure = "empty instance";
    return r;
}

inline ConditionReport verify_conditions(const IsingInstance& inst, std::size_t R, lm_mode mode) {
    certify_options opt;
    opt.R = R;
    opt.lm = mode;
    return verify_conditions(inst, opt);
}

struct CertifiedBound {
    std::size_t R = 0;
    double X = 0.0;
    double log_T = 0.0;
    double T = 0.0;
    double log_continuous = 0.0;
    double continuous = 0.0; // T ceil(log 8X) (3 + log2 n)
    double gap = 0.0;        // log 2 / (T ceil(log 8X))
    double log_discrete = 0.0;
    double discrete = 0.0;   // ceil(5 n continuous)
    bool heuristic = false;
};

/// Bounds implied by a fully passing report; refuses otherwise.
inline CertifiedBound certified_bound(const ConditionReport& report, std::size_t n) {
    if (!report.all_pass)
        throw certification_refused(report.failure.empty() ? "conditions not satisfied" : report.failure);
    if (n == 0) throw invalid_input("empty instance");
    CertifiedBound c;
    c.R = report.R;
    c.X = report.X;
    c.log_T = report.log_T;
    c.T = std::exp(c.log_T);
    c.heuristic = report.heuristic;
    const double blocks = std::ceil(std::log(8.0 * c.X));
    const double rounds = 3.0 + std::log2(static_cast<double>(n));
    c.log_continuous = c.log_T + std::log(blocks) + std::log(rounds);
    c.continuous = std::exp(c.log_continuous);
    c.gap = std::log(2.0) / (c.T * blocks);
    c.log_discrete = c.log_continuous + std::log(5.0 * static_cast<double>(n));
    c.discrete = std::isfinite(c.continuous) ? discrete_from_continuous_bound(std::max(1.0, c.continuous), n)
                                             : HUGE_VAL;
    return c;
}

/// Certified bound straight from (T, X, n).
inline CertifiedBound certified_bound(double T, double X, std::size_t n) {
    ConditionReport r;
    r.all_pass = true;
    r.X = X;
    r.log_T = std::log(T);
    return certified_bound(r, n);
}

/// Explicit-constant check for a graph of maximum degree d at coupling beta:
/// volume against 1 + d sum (d-1)^{l-1}, local mixing by the cut-width bound
/// against 80 d^3 X^3 exp(5 beta d (X+1)), spatial mixing by the walk tree.
inline ConditionReport theorem1_conditions(const IsingInstance& inst, double d, double beta, std::size_t threads = 1) {
    const auto k = theorem1_constants(d, beta);
    certify_options opt;
    opt.R = k.R;
    opt.lm = lm_mode::cutwidth_bound;
    opt.X = k.X;
    opt.log_T = k.log_T;
    opt.threads = threads;
    return verify_conditions(inst, opt);
}

/// Smallest R in [1, max_radius] at which every vertex passes the spatial
/// mixing condition; nullopt when none does.
inline std::optional<std::size_t> auto_radius(const IsingInstance& inst, std::size_t max_radius,
                                              std::size_t node_cap = default_saw_node_cap) {
    for (std::size_t R = 1; R <= max_radius; ++R) {
        bool ok = true;
        for (std::size_t v = 0; v < inst.num_vertices() && ok; ++v)
            ok = spatial_bound_a_u(inst, static_cast<vertex>(v), R, node_cap).pass;
        if (ok) return R;
    }
    return std::nullopt;
}

} // namespace glauber
