#pragma once

// Brute-force ground truth for small instances: Gibbs distribution by full
// enumeration, exact conditionals, the Glauber transition matrix with its
// spectrum, and exact worst-start mixing times in discrete and continuous time.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "glauber/errors.hpp"
#include "glauber/graph.hpp"

namespace glauber {

/// Total-variation level that defines the mixing time.
inline const double mixing_threshold = 1.0 / (2.0 * std::exp(1.0));

struct exact_caps {
    std::size_t enumeration = 16; // free vertices for enumerate_gibbs / conditionals
    std::size_t matrix = 12;      // free vertices for transition matrices
};

inline double log_add(double a, double b) {
    if (a == -HUGE_VAL) return b;
    if (b == -HUGE_VAL) return a;
    return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct site_coupling {
    std::uint32_t i;
    std::uint32_t j;
    double beta;
};

/// Ising model on a subset of sites with every other relevant vertex frozen.
/// Frozen neighbors are folded into effective fields.  State bit i set means
/// site i carries +.
struct LocalModel {
    std::vector<vertex> sites;
    std::vector<double> field;
    std::vector<site_coupling> couplings;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency;
    std::size_t selection_size = 0; // discrete chain picks uniformly among this many sites

    std::size_t size() const noexcept { return sites.size(); }
    std::size_t num_states() const noexcept { return std::size_t{1} << sites.size(); }

    double hamiltonian(std::uint64_t state) const {
        double h = 0.0;
        for (std::size_t i = 0; i < sites.size(); ++i) h += ((state >> i) & 1 ? field[i] : -field[i]);
        for (const auto& c : couplings) h += (((state >> c.i) ^ (state >> c.j)) & 1) ? -c.beta : c.beta;
        return h;
    }

    /// Field felt by site i in `state`: h_i + sum_j beta_ij sigma_j.
    double local_field(std::uint64_t state, std::size_t i) const {
        double f = field[i];
        for (const auto& [j, b] : adjacency[i]) f += (state >> j) & 1 ? b : -b;
        return f;
    }
};

/// Restrict `inst` to `sites`.  `fixed` has one entry per vertex of the instance
/// (0 = not fixed); clamped vertices are always fixed to their clamp sign.  Every
/// neighbor of a site must be a site or fixed.
inline LocalModel restrict_model(const IsingInstance& inst, std::span<const vertex> sites, std::span<const spin> fixed,
                                 std::size_t selection_size) {
    const std::size_t n = inst.num_vertices();
    if (fixed.size() != n) throw invalid_input("fixed configuration has wrong length");
    std::vector<std::uint32_t> local(n, no_vertex);
    LocalModel m;
    m.sites.assign(sites.begin(), sites.end());
    m.selection_size = std::max(selection_size, sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const vertex v = sites[i];
        if (v >= n) throw invalid_input("site out of range");
        if (inst.is_clamped(v)) throw invalid_input("clamped vertex " + std::to_string(v) + " cannot be a free site");
        if (fixed[v] != 0) throw invalid_input("vertex " + std::to_string(v) + " is both a site and fixed");
        if (local[v] != no_vertex) throw invalid_input("duplicate site " + std::to_string(v));
        local[v] = static_cast<std::uint32_t>(i);
    }
    m.field.resize(sites.size());
    m.adjacency.resize(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const vertex v = sites[i];
        double f = inst.field(v).value();
        const auto nb = inst.graph().neighbors(v);
        const auto cp = inst.neighbor_couplings(v);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const vertex w = nb[k];
            if (local[w] != no_vertex) {
                m.adjacency[i].emplace_back(local[w], cp[k]);
                if (local[w] > i) m.couplings.push_back({static_cast<std::uint32_t>(i), local[w], cp[k]});
                continue;
            }
            spin s = inst.is_clamped(w) ? inst.field(w).clamp_sign() : fixed[w];
            if (s == 0)
                throw invalid_input("neighbor " + std::to_string(w) + " of site " + std::to_string(v) +
                                    " is neither a site nor fixed");
            f += cp[k] * s;
        }
        m.field[i] = f;
    }
    return m;
}

/// Local model over all free vertices of the instance; the discrete chain picks
/// among all n vertices (picking a clamped vertex is a no-op).
inline LocalModel full_model(const IsingInstance& inst) {
    std::vector<spin> fixed(inst.num_vertices(), 0);
    return restrict_model(inst, inst.free_vertices(), fixed, inst.num_vertices());
}

/// Unnormalized log-weights H(sigma) for every state of the model.
inline std::vector<double> log_weights(const LocalModel& m) {
    std::vector<double> h(m.num_states());
    for (std::uint64_t s = 0; s < h.size(); ++s) h[s] = m.hamiltonian(s);
    return h;
}

struct ExactDistribution {
    std::vector<vertex> sites;
    std::vector<double> probabilities;
    std::vector<double> log_probabilities;
    double log_Z = 0.0;

    std::size_t num_states() const noexcept { return probabilities.size(); }

    /// P(sigma_site = +) for local site index i.
    double marginal_plus(std::size_t i) const {
        double p = 0.0;
        for (std::size_t s = 0; s < probabilities.size(); ++s)
            if ((s >> i) & 1) p += probabilities[s];
        return p;
    }
    double min_log_probability() const {
        return *std::min_element(log_probabilities.begin(), log_probabilities.end());
    }
};

inline ExactDistribution exact_distribution(const LocalModel& m) {
    ExactDistribution d;
    d.sites = m.sites;
    d.log_probabilities = log_weights(m);
    double lz = -HUGE_VAL;
    for (double w : d.log_probabilities) lz = log_add(lz, w);
    d.log_Z = lz;
    d.probabilities.resize(d.log_probabilities.size());
    for (std::size_t s = 0; s < d.probabilities.size(); ++s) {
        d.log_probabilities[s] -= lz;
        d.probabilities[s] = std::exp(d.log_probabilities[s]);
    }
    return d;
}

/// Gibbs distribution over the free vertices (clamps folded into fields).  log_Z
/// is the log partition function of that reduced model; it equals log Z(beta)
/// when no vertex is clamped.
inline ExactDistribution enumerate_gibbs(const IsingInstance& inst, std::size_t cap = exact_caps{}.enumeration) {
    if (inst.free_vertices().size() > cap)
        throw size_cap_exceeded("enumeration needs " + std::to_string(inst.free_vertices().size()) +
                                " free vertices, cap is " + std::to_string(cap));
    return exact_distribution(full_model(inst));
}

/// Exact P(sigma_v = + | sigma_Lambda = eta).
inline double conditional_marginal(const IsingInstance& inst, vertex v, std::span<const vertex> lambda,
                                   std::span<const spin> eta, std::size_t cap = exact_caps{}.enumeration) {
    const std::size_t n = inst.num_vertices();
    if (v >= n) throw invalid_input("vertex out of range");
    if (lambda.size() != eta.size()) throw invalid_input("conditioning set and configuration differ in length");
    std::vector<spin> fixed(n, 0);
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const vertex u = lambda[i];
        if (u >= n) throw invalid_input("conditioning vertex out of range");
        if (u == v) throw invalid_input("target vertex is in the conditioning set");
        if (eta[i] != 1 && eta[i] != -1) throw invalid_input("conditioning spins must be +1 or -1");
        if (inst.is_clamped(u)) {
            if (inst.field(u).clamp_sign() != eta[i])
                throw invalid_input("conditioning event has probability zero (vertex " + std::to_string(u) +
                                    " is clamped to the opposite sign)");
            continue;
        }
        fixed[u] = eta[i];
    }
    if (inst.is_clamped(v)) return inst.field(v).clamp_sign() > 0 ? 1.0 : 0.0;

    // Only the component of v after deleting fixed vertices matters.
    std::vector<vertex> sites;
    std::vector<bool> seen(n, false);
    std::vector<vertex> stack{v};
    seen[v] = true;
    while (!stack.empty()) {
        const vertex u = stack.back();
        stack.pop_back();
        sites.push_back(u);
        for (vertex w : inst.graph().neighbors(u))
            if (!seen[w] && fixed[w] == 0 && !inst.is_clamped(w)) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    std::sort(sites.begin(), sites.end());
    if (sites.size() > cap)
        throw size_cap_exceeded("conditional marginal needs " + std::to_string(sites.size()) +
                                " free vertices, cap is " + std::to_string(cap));
    const auto m = restrict_model(inst, sites, fixed, sites.size());
    const auto vi = static_cast<std::size_t>(std::lower_bound(sites.begin(), sites.end(), v) - sites.begin());
    double lp = -HUGE_VAL, lm = -HUGE_VAL;
    for (std::uint64_t s = 0; s < m.num_states(); ++s) {
        const double h = m.hamiltonian(s);
        if ((s >> vi) & 1) lp = log_add(lp, h);
        else lm = log_add(lm, h);
    }
    return logistic(lp - lm);
}

inline double conditional_marginal(const IsingInstance& inst, vertex v, const std::vector<vertex>& lambda,
                                   const std::vector<spin>& eta, std::size_t cap = exact_caps{}.enumeration) {
    return conditional_marginal(inst, v, std::span<const vertex>(lambda), std::span<const spin>(eta), cap);
}

/// Row-stochastic kernel of the single-site heat-bath chain and its spectrum.
struct TransitionSpectrum {
    std::size_t selection_size = 0;
    Eigen::MatrixXd kernel;
    std::vector<double> eigenvalues; // descending; eigenvalues[0] == 1
    Eigen::MatrixXd eigenvectors;    // orthonormal eigenvectors of the symmetrized kernel, same order
    double gap = 0.0;                // min(1 - lambda_2, 1 - |lambda_min|)
    double relaxation_time = 0.0;    // 1 / gap

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(kernel.rows()); }
    double lambda2() const noexcept { return eigenvalues.size() > 1 ? eigenvalues[1] : 0.0; }
    /// Gap of the rate-1-per-site continuous-time chain.
    double continuous_gap() const noexcept {
        return eigenvalues.size() > 1 ? static_cast<double>(selection_size) * (1.0 - lambda2()) : HUGE_VAL;
    }
    double continuous_relaxation_time() const noexcept { return 1.0 / continuous_gap(); }
};

inline Eigen::MatrixXd heat_bath_kernel(const LocalModel& m) {
    const std::size_t N = m.num_states();
    const double sel = static_cast<double>(m.selection_size);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    const double idle = static_cast<double>(m.selection_size - m.size()) / sel;
    for (std::uint64_t s = 0; s < N; ++s) {
        const auto row = static_cast<Eigen::Index>(s);
        K(row, row) += idle;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double p = logistic(2.0 * m.local_field(s, i));
            const std::uint64_t up = s | (std::uint64_t{1} << i), down = s & ~(std::uint64_t{1} << i);
            K(row, static_cast<Eigen::Index>(up)) += p / sel;
            K(row, static_cast<Eigen::Index>(down)) += (1.0 - p) / sel;
        }
    }
    return K;
}

inline TransitionSpectrum transition_spectrum(const LocalModel& m, std::size_t cap = exact_caps{}.matrix) {
    if (m.size() > cap)
        throw size_cap_exceeded("transition matrix needs " + std::to_string(m.size()) + " free vertices, cap is " +
                                std::to_string(cap));
    TransitionSpectrum t;
    t.selection_size = m.selection_size;
    t.kernel = heat_bath_kernel(m);
    const auto N = t.kernel.rows();
    // sqrt(K(x,y) K(y,x)) equals D^{1/2} K D^{-1/2} for a reversible kernel and
    // never forms the (possibly huge) ratio pi(x)/pi(y).
    Eigen::MatrixXd sym(N, N);
    for (Eigen::Index x = 0; x < N; ++x)
        for (Eigen::Index y = 0; y < N; ++y)
            sym(x, y) = x == y ? t.kernel(x, x) : std::sqrt(t.kernel(x, y) * t.kernel(y, x));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigen-decomposition failed");
    const auto& ev = solver.eigenvalues();
    t.eigenvalues.resize(static_cast<std::size_t>(N));
    t.eigenvectors.resize(N, N);
    for (Eigen::Index k = 0; k < N; ++k) {
        t.eigenvalues[static_cast<std::size_t>(k)] = ev(N - 1 - k);
        t.eigenvectors.col(k) = solver.eigenvectors().col(N - 1 - k);
    }
    if (N == 1) {
        t.gap = HUGE_VAL;
        t.relaxation_time = 0.0;
    } else {
        t.gap = std::min(1.0 - t.eigenvalues[1], 1.0 - std::abs(t.eigenvalues.back()));
        t.relaxation_time = 1.0 / t.gap;
    }
    return t;
}

/// Transition matrix of the discrete-time Gibbs sampler on the whole instance.
inline TransitionSpectrum transition_matrix(const IsingInstance& inst, std::size_t cap = exact_caps{}.matrix) {
    if (inst.free_vertices().size() > cap)
        throw size_cap_exceeded("transition matrix needs " + std::to_string(inst.free_vertices().size()) +
                                " free vertices, cap is " + std::to_string(cap));
    return transition_spectrum(full_model(inst), cap);
}

/// max_x |pi(x) K(x,y) - pi(y) K(y,x)|.
inline double detailed_balance_defect(const TransitionSpectrum& t, const ExactDistribution& d) {
    double worst = 0.0;
    const auto N = t.kernel.rows();
    for (Eigen::Index x = 0; x < N; ++x)
        for (Eigen::Index y = x + 1; y < N; ++y)
            worst = std::max(worst, std::abs(d.probabilities[static_cast<std::size_t>(x)] * t.kernel(x, y) -
                                             d.probabilities[static_cast<std::size_t>(y)] * t.kernel(y, x)));
    return worst;
}

/// max over starting states of || P(x, .) - pi ||_TV.
inline double worst_start_tv(const Eigen::MatrixXd& P, const std::vector<double>& pi) {
    double worst = 0.0;
    for (Eigen::Index x = 0; x < P.rows(); ++x) {
        double s = 0.0;
        for (Eigen::Index y = 0; y < P.cols(); ++y) s += std::abs(P(x, y) - pi[static_cast<std::size_t>(y)]);
        worst = std::max(worst, 0.5 * s);
    }
    return worst;
}

namespace detail {

/// Smallest m >= 0 with tv(unit^m) <= threshold, found by doubling and then
/// binary lifting over the stored powers (worst-start TV is non-increasing in m).
/// `fine_levels` limits how many low-order bits are resolved; unresolved bits are
/// rounded up.  Returns m together with the rounding granularity.
inline std::pair<std::uint64_t, std::uint64_t> first_mixed_power(const Eigen::MatrixXd& unit,
                                                                 const std::vector<double>& pi,
                                                                 std::size_t fine_levels = 64) {
    const auto N = unit.rows();
    if (worst_start_tv(Eigen::MatrixXd::Identity(N, N), pi) <= mixing_threshold) return {0, 1};
    std::vector<Eigen::MatrixXd> powers{unit};
    while (worst_start_tv(powers.back(), pi) > mixing_threshold) {
        if (powers.size() > 62) throw size_cap_exceeded("chain does not mix within 2^62 steps");
        Eigen::MatrixXd sq(N, N);
        sq.noalias() = powers.back() * powers.back();
        powers.push_back(std::move(sq));
    }
    const std::size_t j = powers.size() - 1;
    if (j == 0) return {1, 1};
    Eigen::MatrixXd current = powers[j - 1];
    std::uint64_t lo = std::uint64_t{1} << (j - 1);
    const std::size_t lowest = j - 1 > fine_levels ? j - 1 - fine_levels : 0;
    Eigen::MatrixXd candidate(N, N);
    for (std::size_t i = j - 1; i-- > lowest;) {
        candidate.noalias() = current * powers[i];
        if (worst_start_tv(candidate, pi) > mixing_threshold) {
            current.swap(candidate);
            lo += std::uint64_t{1} << i;
        }
    }
    const std::uint64_t granularity = std::uint64_t{1} << lowest;
    return {lo + granularity, granularity};
}

/// exp(a (K - I)) for small a by truncated Taylor series of exp(aK).
inline Eigen::MatrixXd short_time_kernel(const Eigen::MatrixXd& K, double a) {
    const auto N = K.rows();
    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(N, N);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(N, N);
    Eigen::MatrixXd next(N, N);
    for (int m = 1; m <= 12; ++m) {
        next.noalias() = term * K;
        term = next * (a / m);
        sum += term;
        if (term.maxCoeff() < 1e-20) break;
    }
    return sum * std::exp(-a);
}

} // namespace detail

/// Discrete-time mixing time: smallest t with max_x TV(P^t(x,.), pi) <= 1/(2e).
inline std::uint64_t exact_mixing_time(const TransitionSpectrum& t, const ExactDistribution& d) {
    return detail::first_mixed_power(t.kernel, d.probabilities).first;
}

/// Heat kernel exp(t L) of the continuous-time chain, L = n (K - I).
inline Eigen::MatrixXd continuous_kernel(const TransitionSpectrum& t, double time) {
    if (time < 0) throw invalid_input("negative time");
    const double rate = static_cast<double>(t.selection_size) * time;
    int squarings = 0;
    double a = rate;
    while (a > 1.0 / 64.0) {
        a *= 0.5;
        ++squarings;
    }
    Eigen::MatrixXd P = detail::short_time_kernel(t.kernel, a);
    Eigen::MatrixXd tmp(P.rows(), P.cols());
    for (int s = 0; s < squarings; ++s) {
        tmp.noalias() = P * P;
        P.swap(tmp);
    }
    return P;
}

inline double continuous_tv(const TransitionSpectrum& t, const ExactDistribution& d, double time) {
    return worst_start_tv(continuous_kernel(t, time), d.probabilities);
}

/// Continuous-time (rate 1 per site) mixing time, resolved to a relative
/// precision of about 2^-20 and rounded up.
inline double exact_continuous_mixing_time(const TransitionSpectrum& t, const ExactDistribution& d) {
    constexpr double step = 1.0 / 4096.0;
    const Eigen::MatrixXd unit =
        detail::short_time_kernel(t.kernel, static_cast<double>(t.selection_size) * step);
    return static_cast<double>(detail::first_mixed_power(unit, d.probabilities, 20).first) * step;
}

/// f = phi_2 / sqrt(pi): the eigenfunction of the second eigenvalue in L2(pi).
inline std::vector<double> second_eigenfunction(const TransitionSpectrum& t, const ExactDistribution& d) {
    if (t.dimension() < 2) throw invalid_input("state space has a single state");
    std::vector<double> f(t.dimension());
    for (std::size_t x = 0; x < f.size(); ++x)
        f[x] = t.eigenvectors(static_cast<Eigen::Index>(x), 1) / std::sqrt(d.probabilities[x]);
    return f;
}

/// Dirichlet form E(f,f) = 1/2 sum_{x,y} pi(x) K(x,y) (f(x) - f(y))^2.
inline double dirichlet_form(const TransitionSpectrum& t, const ExactDistribution& d, std::span<const double> f) {
    double e = 0.0;
    const auto N = t.kernel.rows();
    for (Eigen::Index x = 0; x < N; ++x)
        for (Eigen::Index y = 0; y < N; ++y) {
            const double diff = f[static_cast<std::size_t>(x)] - f[static_cast<std::size_t>(y)];
            e += d.probabilities[static_cast<std::size_t>(x)] * t.kernel(x, y) * diff * diff;
        }
    return 0.5 * e;
}

struct DirichletReport {
    std::vector<double> ratios; // Var(f) / E(f,f)
    double relaxation_time = 0.0;
    bool ok = true;
};

/// Confirms Var_pi(f) / E(f,f) <= relaxation time for each mean-zero f.
inline DirichletReport dirichlet_check(const TransitionSpectrum& t, const ExactDistribution& d,
                                       std::span<const std::vector<double>> functions) {
    DirichletReport r;
    r.relaxation_time = t.relaxation_time;
    for (const auto& f : functions) {
        if (f.size() != d.num_states()) throw invalid_input("test function has wrong length");
        double mean = 0.0, second = 0.0;
        for (std::size_t x = 0; x < f.size(); ++x) {
            mean += d.probabilities[x] * f[x];
            second += d.probabilities[x] * f[x] * f[x];
        }
        const double var = second - mean * mean;
        if (!(var > 1e-300)) throw invalid_input("test function is constant");
        if (std::abs(mean) > 1e-9 * std::sqrt(second)) throw invalid_input("test function does not have mean zero");
        const double ratio = var / dirichlet_form(t, d, f);
        r.ratios.push_back(ratio);
        if (ratio > t.relaxation_time * (1.0 + 1e-9)) r.ok = false;
    }
    return r;
}

} // namespace glauber
