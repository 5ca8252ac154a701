#pragma once

// Single-site heat-bath dynamics: discrete and continuous time, the monotone
// grand coupling with censoring windows, censoring dominance checks and
// disagreement decay curves.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "glauber/errors.hpp"
#include "glauber/exact.hpp"
#include "glauber/graph.hpp"
#include "glauber/parallel.hpp"
#include "glauber/rng.hpp"
#include "glauber/stats.hpp"

namespace glauber {

using SpinConfig = std::vector<spin>;

/// Flattened view of an instance tuned for repeated heat-bath updates.  A vertex
/// whose incident couplings are all equal gets a lookup table indexed by the sum
/// of its neighbors' spins.
class GibbsKernel {
public:
    explicit GibbsKernel(const IsingInstance& inst) : n_(inst.num_vertices()) {
        offsets_.assign(n_ + 1, 0);
        field_.resize(n_);
        clamp_.resize(n_);
        table_offset_.assign(n_, no_table);
        for (std::size_t v = 0; v < n_; ++v) {
            const auto vv = static_cast<vertex>(v);
            const auto nb = inst.graph().neighbors(vv);
            const auto cp = inst.neighbor_couplings(vv);
            offsets_[v] = nbrs_.size();
            nbrs_.insert(nbrs_.end(), nb.begin(), nb.end());
            betas_.insert(betas_.end(), cp.begin(), cp.end());
            field_[v] = inst.field(vv).value();
            clamp_[v] = inst.field(vv).clamp_sign();
            if (clamp_[v] != 0 || nb.empty() || nb.size() > 64) continue;
            if (!std::all_of(cp.begin(), cp.end(), [&](double b) { return b == cp[0]; })) continue;
            table_offset_[v] = table_.size();
            const auto deg = static_cast<long>(nb.size());
            for (long s = -deg; s <= deg; ++s) table_.push_back(logistic(2.0 * (field_[v] + cp[0] * static_cast<double>(s))));
        }
        offsets_[n_] = nbrs_.size();
    }

    std::size_t size() const noexcept { return n_; }
    bool is_clamped(vertex v) const noexcept { return clamp_[v] != 0; }
    spin clamp_sign(vertex v) const noexcept { return clamp_[v]; }

    /// Heat-bath probability of + at v given the rest of `config`.
    double plus_probability(const spin* config, vertex v) const noexcept {
        if (clamp_[v] != 0) return clamp_[v] > 0 ? 1.0 : 0.0;
        const std::size_t b = offsets_[v], e = offsets_[v + 1];
        if (table_offset_[v] != no_table) {
            long s = 0;
            for (std::size_t k = b; k < e; ++k) s += config[nbrs_[k]];
            return table_[table_offset_[v] + static_cast<std::size_t>(s + static_cast<long>(e - b))];
        }
        double f = field_[v];
        for (std::size_t k = b; k < e; ++k) f += betas_[k] * config[nbrs_[k]];
        return logistic(2.0 * f);
    }

    /// New spin at v driven by the uniform u; monotone in the neighbors.
    spin resample(const spin* config, vertex v, double u) const noexcept {
        if (clamp_[v] != 0) return clamp_[v];
        return u <= plus_probability(config, v) ? spin{1} : spin{-1};
    }

    /// Extremal configuration consistent with the clamps.
    SpinConfig extremal(spin s) const {
        SpinConfig c(n_, s);
        for (std::size_t v = 0; v < n_; ++v)
            if (clamp_[v] != 0) c[v] = clamp_[v];
        return c;
    }

private:
    static constexpr std::size_t no_table = static_cast<std::size_t>(-1);
    std::size_t n_;
    std::vector<std::size_t> offsets_;
    std::vector<vertex> nbrs_;
    std::vector<double> betas_;
    std::vector<double> field_;
    std::vector<spin> clamp_;
    std::vector<std::size_t> table_offset_;
    std::vector<double> table_;
};

struct ChainState {
    SpinConfig config;
    double time = 0.0;
    std::uint64_t steps = 0;
    philox_stream rng;
};

inline ChainState make_chain(const GibbsKernel& k, SpinConfig start, std::uint64_t seed, std::uint32_t replica = 0) {
    if (start.size() != k.size()) throw invalid_input("start configuration has wrong length");
    for (std::size_t v = 0; v < start.size(); ++v) {
        if (start[v] != 1 && start[v] != -1) throw invalid_input("spins must be +1 or -1");
        if (k.is_clamped(static_cast<vertex>(v))) start[v] = k.clamp_sign(static_cast<vertex>(v));
    }
    return {std::move(start), 0.0, 0, philox_stream(seed, stream_tag::dynamics, replica)};
}

/// One step of the discrete-time sampler: uniform vertex, heat-bath resample.
inline void step_discrete(ChainState& s, const GibbsKernel& k) {
    const auto v = static_cast<vertex>(s.rng.below(k.size()));
    const double u = s.rng.uniform();
    s.config[v] = k.resample(s.config.data(), v, u);
    ++s.steps;
    s.time = static_cast<double>(s.steps);
}

/// Advance the rate-1-per-site continuous-time chain by `duration`: draw
/// M ~ Poisson(n t) and apply M uniform-site updates.
inline void run_continuous(ChainState& s, const GibbsKernel& k, double duration) {
    if (!(duration >= 0.0)) throw invalid_input("duration must be nonnegative");
    const std::uint64_t updates = s.rng.poisson(static_cast<double>(k.size()) * duration);
    for (std::uint64_t i = 0; i < updates; ++i) {
        const auto v = static_cast<vertex>(s.rng.below(k.size()));
        const double u = s.rng.uniform();
        s.config[v] = k.resample(s.config.data(), v, u);
    }
    s.steps += updates;
    s.time += duration;
}

enum class time_mode { discrete, continuous };

inline const char* to_string(time_mode m) { return m == time_mode::discrete ? "discrete" : "continuous"; }

/// From `start` until the next window's start only vertices in `allowed` update.
struct CensorWindow {
    double start = 0.0;
    std::vector<vertex> allowed; // sorted
};

struct UpdateSchedule {
    time_mode mode = time_mode::discrete;
    double horizon = 0.0; // steps (discrete) or time (continuous)
    std::vector<CensorWindow> windows;

    void validate(std::size_t n) const {
        if (!(horizon > 0.0)) throw invalid_input("schedule horizon must be positive");
        for (std::size_t i = 0; i < windows.size(); ++i) {
            if (!(windows[i].start >= 0.0)) throw invalid_input("censor window starts before time 0");
            if (i > 0 && !(windows[i].start > windows[i - 1].start))
                throw invalid_input("censor windows must be strictly time-ordered");
            if (!std::is_sorted(windows[i].allowed.begin(), windows[i].allowed.end()))
                throw invalid_input("censor window vertex set must be sorted");
            for (vertex v : windows[i].allowed)
                if (v >= n) throw invalid_input("censor window vertex out of range");
        }
    }
};

/// Tracks which window is active as time moves forward.
class window_cursor {
public:
    explicit window_cursor(const UpdateSchedule& s) : s_(s) {}
    bool allows(vertex v, double t) {
        while (next_ < s_.windows.size() && s_.windows[next_].start <= t) ++next_;
        if (next_ == 0) return true;
        const auto& a = s_.windows[next_ - 1].allowed;
        return std::binary_search(a.begin(), a.end(), v);
    }

private:
    const UpdateSchedule& s_;
    std::size_t next_ = 0;
};

/// Geometric checkpoint grid from `first` to `last` (inclusive) with `points` entries.
inline std::vector<double> geometric_grid(double first, double last, std::size_t points, bool integral = false) {
    if (!(first > 0.0) || !(last >= first) || points == 0) throw invalid_input("bad checkpoint grid");
    std::vector<double> g;
    for (std::size_t i = 0; i < points; ++i) {
        const double x = points == 1 ? first : first * std::pow(last / first, static_cast<double>(i) / static_cast<double>(points - 1));
        const double y = integral ? std::round(x) : x;
        if (g.empty() || y > g.back()) g.push_back(y);
    }
    return g;
}

struct UpdateEvent {
    vertex v;
    double u;
    double time;
};

struct coupling_options {
    std::vector<double> checkpoints;      // increasing; recorded when time first reaches each
    bool track_middle = false;            // a third chain from a random start between the extremes
    bool check_every_update = false;      // compare the updated site of every update
    bool record_updates = false;
    bool record_site_disagreements = false;
    bool stop_at_coupling = true;
};

struct CouplingTrace {
    std::vector<UpdateEvent> updates;
    std::vector<double> checkpoint_times;
    std::vector<std::size_t> disagreements; // aligned with checkpoint_times
    std::vector<std::vector<std::uint8_t>> site_disagreements;
    std::optional<double> coupling_time;    // empty when censored at the horizon
    std::uint64_t updates_drawn = 0;
    std::uint64_t updates_skipped = 0;      // dropped by censor windows
    std::uint64_t order_violations = 0;
    std::uint64_t sites_compared = 0;
    bool middle_coupled = true;             // middle chain agreed with the extremes at coupling

    bool censored() const noexcept { return !coupling_time.has_value(); }
};

/// Runs X+ from the maximal and X- from the minimal configuration on one shared
/// stream of (site, uniform) pairs, skipping updates outside the active censor
/// window in both chains.
inline CouplingTrace grand_coupling_run(const IsingInstance& inst, const UpdateSchedule& schedule, std::uint64_t seed,
                                        std::uint32_t replica = 0, const coupling_options& opt = {}) {
    const std::size_t n = inst.num_vertices();
    schedule.validate(n);
    if (!std::is_sorted(opt.checkpoints.begin(), opt.checkpoints.end()))
        throw invalid_input("checkpoints must be increasing");
    const GibbsKernel k(inst);
    SpinConfig hi = k.extremal(1), lo = k.extremal(-1), mid;
    philox_stream rng(seed, stream_tag::dynamics, replica);
    if (opt.track_middle) {
        philox_stream start(seed, stream_tag::start_state, replica);
        mid = k.extremal(1);
        for (std::size_t v = 0; v < n; ++v)
            if (!k.is_clamped(static_cast<vertex>(v))) mid[v] = start.below(2) ? 1 : -1;
    }
    std::size_t count = 0;
    for (std::size_t v = 0; v < n; ++v) count += hi[v] != lo[v];

    CouplingTrace tr;
    std::size_t next_cp = 0;
    auto record_until = [&](double t) {
        while (next_cp < opt.checkpoints.size() && opt.checkpoints[next_cp] <= t) {
            tr.checkpoint_times.push_back(opt.checkpoints[next_cp]);
            tr.disagreements.push_back(count);
            std::size_t violations = 0;
            for (std::size_t v = 0; v < n; ++v) violations += hi[v] < lo[v];
            tr.order_violations += violations;
            tr.sites_compared += n;
            if (opt.record_site_disagreements) {
                std::vector<std::uint8_t> d(n);
                for (std::size_t v = 0; v < n; ++v) d[v] = hi[v] != lo[v];
                tr.site_disagreements.push_back(std::move(d));
            }
            ++next_cp;
        }
    };
    record_until(0.0);
    if (count == 0) tr.coupling_time = 0.0;

    window_cursor cursor(schedule);
    const double rate = static_cast<double>(n);
    double t = 0.0;
    std::uint64_t step = 0;
    while (n > 0 && !(tr.coupling_time && opt.stop_at_coupling)) {
        if (schedule.mode == time_mode::discrete) {
            t = static_cast<double>(++step);
        } else {
            t += rng.exponential(rate);
        }
        if (t > schedule.horizon) break;
        // Checkpoints strictly before this update see the state before it.
        while (next_cp < opt.checkpoints.size() && opt.checkpoints[next_cp] < t) record_until(opt.checkpoints[next_cp]);
        const auto v = static_cast<vertex>(rng.below(n));
        const double u = rng.uniform();
        ++tr.updates_drawn;
        if (opt.record_updates) tr.updates.push_back({v, u, t});
        if (!cursor.allows(v, t)) {
            ++tr.updates_skipped;
            record_until(t);
            continue;
        }
        const bool before = hi[v] != lo[v];
        hi[v] = k.resample(hi.data(), v, u);
        lo[v] = k.resample(lo.data(), v, u);
        if (opt.track_middle) mid[v] = k.resample(mid.data(), v, u);
        const bool after = hi[v] != lo[v];
        count = count + after - before;
        if (opt.check_every_update) {
            ++tr.sites_compared;
            if (hi[v] < lo[v] || (opt.track_middle && (mid[v] > hi[v] || mid[v] < lo[v]))) ++tr.order_violations;
        }
        if (count == 0 && !tr.coupling_time) {
            tr.coupling_time = t;
            if (opt.track_middle) tr.middle_coupled = mid == hi;
        }
        record_until(t);
    }
    // Remaining checkpoints within the horizon see the final state.
    record_until(schedule.horizon);
    return tr;
}

// --- censoring -----------------------------------------------------------------

struct CensoringReport {
    bool subsequence = true;
    bool dominance_holds = true;
    std::size_t upsets_checked = 0;
    std::size_t violations = 0;
    // Per-vertex E[spin] for censored-from-+, full-from-+, full-from--, censored-from--.
    std::vector<double> mean_censored_plus, mean_full_plus, mean_full_minus, mean_censored_minus;
    std::vector<double> half_width; // sampling mode: largest CI half-width per vertex
    std::string mode;
};

inline bool is_subsequence(std::span<const vertex> sub, std::span<const vertex> seq) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < seq.size() && j < sub.size(); ++i)
        if (seq[i] == sub[j]) ++j;
    return j == sub.size();
}

namespace detail {

using wide_real = boost::multiprecision::cpp_bin_float_50;

/// Distribution over the free sites after applying the heat-bath update at
/// each site of `sequence` (in order) starting from the extremal state `s`.
inline std::vector<wide_real> evolve_exact(const LocalModel& m, const std::vector<std::uint32_t>& local_of,
                                           std::span<const vertex> sequence, spin s) {
    const std::size_t N = m.num_states();
    std::vector<wide_real> p(N, wide_real(0)), q(N);
    p[s > 0 ? N - 1 : 0] = 1;
    // Heat-bath probabilities depend only on the state with bit i ignored.
    for (vertex v : sequence) {
        const std::uint32_t i = local_of[v];
        if (i == no_vertex) continue; // clamped site: update is a no-op
        std::fill(q.begin(), q.end(), wide_real(0));
        const std::uint64_t bit = std::uint64_t{1} << i;
        for (std::uint64_t x = 0; x < N; ++x) {
            if (p[x] == 0) continue;
            using std::exp;
            const wide_real f = m.local_field(x, i);
            const wide_real plus = 1 / (1 + exp(-2 * f));
            q[x | bit] += p[x] * plus;
            q[x & ~bit] += p[x] * (1 - plus);
        }
        p.swap(q);
    }
    return p;
}

/// All up-sets of the Boolean lattice on k <= 4 coordinates, as bit masks over states.
inline std::vector<std::uint32_t> upsets(std::size_t k) {
    const std::size_t N = std::size_t{1} << k;
    std::vector<std::uint32_t> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
        bool up = true;
        for (std::size_t x = 0; x < N && up; ++x) {
            if (!((mask >> x) & 1)) continue;
            for (std::size_t i = 0; i < k; ++i)
                if (!((mask >> (x | (std::size_t{1} << i))) & 1)) {
                    up = false;
                    break;
                }
        }
        if (up) out.push_back(static_cast<std::uint32_t>(mask));
    }
    return out;
}

} // namespace detail

enum class check_mode { exact, sampling };

struct sampling_options {
    std::size_t replicas = 20000;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    double z = 3.0;
};

/// Censoring check for deterministic site sequences.  Exact mode compares the
/// mass of every up-set under the censored and full chains started from both
/// extremes; the masses are accumulated in 50-digit arithmetic and rounded to
/// double before the zero-tolerance comparison.
inline CensoringReport censoring_dominance_check(const IsingInstance& inst, std::span<const vertex> full,
                                                 std::span<const vertex> censored, check_mode mode,
                                                 const sampling_options& sopt = {}) {
    for (vertex v : full)
        if (v >= inst.num_vertices()) throw invalid_input("update site out of range");
    if (!is_subsequence(censored, full))
        throw invalid_input("censored update sequence is not a subsequence of the full sequence");
    CensoringReport r;
    const std::size_t n = inst.num_vertices();
    if (mode == check_mode::exact) {
        r.mode = "exact";
        const auto m = full_model(inst);
        if (m.size() > 4) throw size_cap_exceeded("exact censoring check supports at most 4 free vertices");
        std::vector<std::uint32_t> local_of(n, no_vertex);
        for (std::size_t i = 0; i < m.sites.size(); ++i) local_of[m.sites[i]] = static_cast<std::uint32_t>(i);
        const auto zp = detail::evolve_exact(m, local_of, censored, 1);
        const auto xp = detail::evolve_exact(m, local_of, full, 1);
        const auto xm = detail::evolve_exact(m, local_of, full, -1);
        const auto zm = detail::evolve_exact(m, local_of, censored, -1);
        auto mass = [](const std::vector<detail::wide_real>& p, std::uint32_t set) {
            detail::wide_real s = 0;
            for (std::size_t x = 0; x < p.size(); ++x)
                if ((set >> x) & 1) s += p[x];
            return static_cast<double>(s);
        };
        for (std::uint32_t a : detail::upsets(m.size())) {
            ++r.upsets_checked;
            const double a_zp = mass(zp, a), a_xp = mass(xp, a), a_xm = mass(xm, a), a_zm = mass(zm, a);
            if (!(a_zp >= a_xp) || !(a_xp >= a_xm) || !(a_xm >= a_zm)) ++r.violations;
        }
        auto site_means = [&](const std::vector<detail::wide_real>& p) {
            std::vector<double> out(n);
            for (std::size_t v = 0; v < n; ++v) {
                if (local_of[v] == no_vertex) {
                    out[v] = inst.field(static_cast<vertex>(v)).clamp_sign();
                    continue;
                }
                detail::wide_real s = 0;
                for (std::size_t x = 0; x < p.size(); ++x) s += (x >> local_of[v]) & 1 ? p[x] : -p[x];
                out[v] = static_cast<double>(s);
            }
            return out;
        };
        r.mean_censored_plus = site_means(zp);
        r.mean_full_plus = site_means(xp);
        r.mean_full_minus = site_means(xm);
        r.mean_censored_minus = site_means(zm);
        r.half_width.assign(n, 0.0);
        r.dominance_holds = r.violations == 0;
        return r;
    }

    r.mode = "sampling";
    const GibbsKernel k(inst);
    // Each replica draws one uniform per update of the full sequence; the
    // censored chains reuse the uniforms of the updates they keep.
    std::vector<std::array<std::vector<std::int8_t>, 4>> finals(sopt.replicas);
    parallel_for(sopt.replicas, sopt.threads, [&](std::size_t rep) {
        philox_stream rng(sopt.seed, stream_tag::sampling_check, static_cast<std::uint32_t>(rep));
        SpinConfig zp = k.extremal(1), xp = k.extremal(1), xm = k.extremal(-1), zm = k.extremal(-1);
        std::size_t j = 0;
        for (vertex v : full) {
            const double u = rng.uniform();
            xp[v] = k.resample(xp.data(), v, u);
            xm[v] = k.resample(xm.data(), v, u);
            if (j < censored.size() && censored[j] == v) {
                zp[v] = k.resample(zp.data(), v, u);
                zm[v] = k.resample(zm.data(), v, u);
                ++j;
            }
        }
        finals[rep] = {zp, xp, xm, zm};
    });
    std::array<std::vector<double>, 4> means;
    for (auto& mv : means) mv.assign(n, 0.0);
    for (const auto& f : finals)
        for (std::size_t c = 0; c < 4; ++c)
            for (std::size_t v = 0; v < n; ++v) means[c][v] += f[c][v];
    const double reps = static_cast<double>(std::max<std::size_t>(1, sopt.replicas));
    for (auto& mv : means)
        for (double& x : mv) x /= reps;
    r.half_width.assign(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        double worst = 0.0;
        for (std::size_t c = 0; c < 4; ++c) {
            const double var = std::max(0.0, 1.0 - means[c][v] * means[c][v]);
            worst = std::max(worst, sopt.z * std::sqrt(var / reps));
        }
        r.half_width[v] = worst;
        const double tol = 2.0 * worst;
        if (means[0][v] + tol < means[1][v] || means[1][v] + tol < means[2][v] || means[2][v] + tol < means[3][v])
            ++r.violations;
    }
    r.mean_censored_plus = means[0];
    r.mean_full_plus = means[1];
    r.mean_full_minus = means[2];
    r.mean_censored_minus = means[3];
    r.dominance_holds = r.violations == 0;
    return r;
}

inline CensoringReport censoring_dominance_check(const IsingInstance& inst, const std::vector<vertex>& full,
                                                 const std::vector<vertex>& censored, check_mode mode,
                                                 const sampling_options& sopt = {}) {
    return censoring_dominance_check(inst, std::span<const vertex>(full), std::span<const vertex>(censored), mode,
                                     sopt);
}

// --- disagreement decay --------------------------------------------------------

struct DecayCurve {
    std::vector<double> times;
    std::vector<double> mean_disagreements;
    std::vector<double> max_site_probability; // max_u P(X+(u) != X-(u))
    std::vector<vertex> argmax_site;
    std::vector<Interval> max_site_interval;  // Wilson interval at the argmax site
    std::size_t replicas = 0;
};

inline DecayCurve disagreement_decay(const IsingInstance& inst, time_mode mode, std::vector<double> checkpoints,
                                     std::size_t replicas, std::uint64_t seed, std::size_t threads = 1) {
    if (replicas < 30) throw invalid_input("disagreement decay needs at least 30 replicas");
    if (checkpoints.empty()) throw invalid_input("disagreement decay needs checkpoints");
    std::sort(checkpoints.begin(), checkpoints.end());
    const std::size_t n = inst.num_vertices(), K = checkpoints.size();
    UpdateSchedule sched;
    sched.mode = mode;
    sched.horizon = checkpoints.back();
    coupling_options opt;
    opt.checkpoints = checkpoints;
    opt.record_site_disagreements = true;
    opt.stop_at_coupling = true;
    std::vector<std::vector<std::uint32_t>> site_counts(replicas);
    std::vector<std::vector<std::size_t>> totals(replicas);
    parallel_for(replicas, threads, [&](std::size_t rep) {
        const auto tr = grand_coupling_run(inst, sched, seed, static_cast<std::uint32_t>(rep), opt);
        auto& sc = site_counts[rep];
        sc.assign(K * n, 0);
        auto& tot = totals[rep];
        tot.assign(K, 0);
        // After coupling the trace stops early; later checkpoints are zero.
        for (std::size_t c = 0; c < tr.checkpoint_times.size(); ++c) {
            tot[c] = tr.disagreements[c];
            for (std::size_t v = 0; v < n; ++v) sc[c * n + v] = tr.site_disagreements[c][v];
        }
    });
    DecayCurve d;
    d.times = checkpoints;
    d.replicas = replicas;
    std::vector<std::uint64_t> per_site(K * n, 0);
    std::vector<double> tot(K, 0.0);
    for (std::size_t rep = 0; rep < replicas; ++rep) {
        for (std::size_t i = 0; i < K * n; ++i) per_site[i] += site_counts[rep][i];
        for (std::size_t c = 0; c < K; ++c) tot[c] += static_cast<double>(totals[rep][c]);
    }
    for (std::size_t c = 0; c < K; ++c) {
        std::uint64_t best = 0;
        vertex arg = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (per_site[c * n + v] > best) {
                best = per_site[c * n + v];
                arg = static_cast<vertex>(v);
            }
        d.mean_disagreements.push_back(tot[c] / static_cast<double>(replicas));
        d.max_site_probability.push_back(static_cast<double>(best) / static_cast<double>(replicas));
        d.argmax_site.push_back(arg);
        d.max_site_interval.push_back(wilson_interval(best, replicas));
    }
    return d;
}

/// Exponential decay rate of the mean disagreement count: minus the slope of a
/// least-squares fit of log(mean) against time, over checkpoints whose mean lies
/// in [lo_level, hi_level].
inline LinearFit fit_decay_rate(const DecayCurve& d, double lo_level, double hi_level) {
    std::vector<double> x, y;
    for (std::size_t c = 0; c < d.times.size(); ++c) {
        const double m = d.mean_disagreements[c];
        if (m >= lo_level && m <= hi_level && m > 0) {
            x.push_back(d.times[c]);
            y.push_back(std::log(m));
        }
    }
    auto fit = linear_fit(x, y);
    fit.slope = -fit.slope;
    return fit;
}

/// Discrete-time mixing bound from a continuous-time bound T >= 1: ceil(5 T n).
inline double discrete_from_continuous_bound(double T, std::size_t n) {
    if (!(T >= 1.0)) throw invalid_input("continuous mixing bound must be at least 1");
    // Products such as 5 * 2.2 * 100 land one ulp above an integer.
    const double x = 5.0 * T * static_cast<double>(n);
    const double r = std::round(x);
    return std::abs(x - r) <= 1e-12 * x ? r : std::ceil(x);
}

} // namespace glauber
