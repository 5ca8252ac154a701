#pragma once

// Coupling-time scans over (family, n, beta) grids.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glauber/dynamics.hpp"
#include "glauber/errors.hpp"
#include "glauber/generators.hpp"
#include "glauber/graph.hpp"
#include "glauber/parallel.hpp"
#include "glauber/stats.hpp"

namespace glauber {

/// splitmix64 finalizer; used to derive per-point keys from the master seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

struct family_params {
    std::string family = "cycle";
    std::size_t n = 0;
    double d = 0.0;        // degree (regular) or mean degree (er, gw)
    std::size_t depth = 0; // gw
    std::size_t rows = 0;  // grid; 0 means square
    std::size_t cols = 0;
};

inline bool is_random_family(const std::string& f) { return f == "er" || f == "regular" || f == "gw"; }

inline Graph make_family_graph(const family_params& p, std::uint64_t seed, std::uint32_t replica) {
    const auto& f = p.family;
    if (f == "er") return gen_erdos_renyi(p.n, p.d, seed, replica);
    if (f == "regular") {
        if (p.d != std::floor(p.d) || p.d < 0) throw invalid_input("regular family needs an integer degree");
        return gen_random_regular(p.n, static_cast<std::size_t>(p.d), seed, replica);
    }
    if (f == "gw") return gen_galton_watson_poisson(p.d, p.depth, seed, replica).graph;
    if (f == "cycle") return gen_cycle(p.n);
    if (f == "path") return gen_path(p.n);
    if (f == "star") {
        if (p.n < 1) throw invalid_input("star needs n >= 1");
        return gen_star(p.n - 1);
    }
    if (f == "complete") return gen_complete(p.n);
    if (f == "grid") {
        std::size_t r = p.rows, c = p.cols;
        if (r == 0 || c == 0) {
            r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(p.n))));
            if (r * r != p.n) throw invalid_input("grid family needs --rows/--cols or a square n");
            c = r;
        }
        return gen_grid(r, c);
    }
    throw invalid_input("unknown graph family '" + f + "'");
}

struct ScanSpec {
    family_params graph;
    std::vector<std::size_t> ns;
    std::vector<double> betas;
    double field = 0.0;
    std::size_t replicas = 1;
    time_mode mode = time_mode::discrete;
    double horizon = 0.0;        // absolute cap; used when > 0
    double horizon_factor = 0.0; // otherwise cap = factor * n ln n (discrete) or factor * ln n (continuous)
    bool fresh_graph = true;     // random families: new graph per replica
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

struct ReplicaRow {
    std::size_t n = 0;
    double beta = 0.0;
    std::size_t replica = 0;
    double coupling_time = 0.0; // meaningful only when !censored
    bool censored = false;
    double horizon = 0.0;
};

struct ScanPoint {
    std::size_t n = 0;
    double beta = 0.0;
    std::size_t replicas = 0;
    std::size_t censored = 0;
    double horizon = 0.0;
    std::optional<double> median;
    Interval median_ci;
    std::optional<double> ratio; // median / (n ln n)

    double censored_fraction() const noexcept {
        return replicas ? static_cast<double>(censored) / static_cast<double>(replicas) : 0.0;
    }
};

struct ScanResult {
    std::vector<ReplicaRow> rows;   // ordered by (beta, n, replica)
    std::vector<ScanPoint> points;  // ordered by (beta, n)
};

inline double scan_horizon(const ScanSpec& s, std::size_t n) {
    if (s.horizon > 0) return s.horizon;
    if (s.horizon_factor > 0) {
        const double ln = std::log(std::max<double>(2.0, static_cast<double>(n)));
        return s.mode == time_mode::discrete ? std::ceil(s.horizon_factor * static_cast<double>(n) * ln)
                                             : s.horizon_factor * ln;
    }
    throw invalid_input("horizon cap must be positive");
}

inline ScanPoint summarize_point(std::size_t n, double beta, double horizon, const std::vector<ReplicaRow>& rows) {
    ScanPoint p;
    p.n = n;
    p.beta = beta;
    p.horizon = horizon;
    p.replicas = rows.size();
    std::vector<double> observed;
    for (const auto& r : rows) {
        if (r.censored) ++p.censored;
        else observed.push_back(r.coupling_time);
    }
    p.median = censored_median(observed, p.censored);
    p.median_ci = median_interval(observed, p.censored);
    if (p.median) p.ratio = *p.median / (static_cast<double>(n) * std::log(static_cast<double>(n)));
    return p;
}

inline ScanResult run_scan(const ScanSpec& s) {
    if (s.ns.empty() || s.betas.empty()) throw invalid_input("scan grids must be nonempty");
    if (s.replicas == 0) throw invalid_input("scan needs at least one replica");
    ScanResult out;
    for (std::size_t bi = 0; bi < s.betas.size(); ++bi) {
        const double beta = s.betas[bi];
        if (!(beta >= 0)) throw invalid_input("beta must be nonnegative");
        for (std::size_t ni = 0; ni < s.ns.size(); ++ni) {
            const std::size_t n = s.ns[ni];
            family_params fp = s.graph;
            fp.n = n;
            const double horizon = scan_horizon(s, n);
            const std::uint64_t point_seed = mix_seed(s.seed ^ mix_seed((static_cast<std::uint64_t>(n) << 16) ^ bi));
            const std::uint64_t graph_seed = mix_seed(s.seed ^ mix_seed(n));
            std::vector<ReplicaRow> rows(s.replicas);
            std::optional<IsingInstance> shared;
            if (!(s.fresh_graph && is_random_family(fp.family))) {
                const Graph g = make_family_graph(fp, graph_seed, 0);
                std::vector<Field> fields(g.num_vertices(), Field::finite(s.field));
                shared = IsingInstance::uniform(g, beta).with_fields(fields);
            }
            parallel_for(s.replicas, s.threads, [&](std::size_t r) {
                UpdateSchedule sched;
                sched.mode = s.mode;
                sched.horizon = horizon;
                auto run = [&](const IsingInstance& inst) {
                    return grand_coupling_run(inst, sched, point_seed, static_cast<std::uint32_t>(r));
                };
                CouplingTrace tr;
                if (shared) {
                    tr = run(*shared);
                } else {
                    const Graph g = make_family_graph(fp, graph_seed, static_cast<std::uint32_t>(r));
                    std::vector<Field> fields(g.num_vertices(), Field::finite(s.field));
                    tr = run(IsingInstance::uniform(g, beta).with_fields(fields));
                }
                rows[r] = {n, beta, r, tr.coupling_time.value_or(0.0), tr.censored(), horizon};
            });
            out.points.push_back(summarize_point(n, beta, horizon, rows));
            out.rows.insert(out.rows.end(), rows.begin(), rows.end());
        }
    }
    return out;
}

/// max/min - 1 of the median ratios at one beta; nullopt if any median is undefined.
inline std::optional<double> ratio_variation(const ScanResult& r, double beta) {
    double lo = HUGE_VAL, hi = 0.0;
    bool any = false;
    for (const auto& p : r.points) {
        if (p.beta != beta) continue;
        if (!p.ratio) return std::nullopt;
        lo = std::min(lo, *p.ratio);
        hi = std::max(hi, *p.ratio);
        any = true;
    }
    if (!any) return std::nullopt;
    return hi / lo - 1.0;
}

} // namespace glauber
