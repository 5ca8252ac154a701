#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "glauber/exact.hpp"
#include "glauber/generators.hpp"
#include "test_support.hpp"

using namespace glauber;
using namespace testing_support;

namespace {

std::vector<IsingInstance> oracle_instances(std::size_t count, std::uint64_t seed, double clamp_probability = 0.15) {
    std::mt19937_64 rng(seed);
    std::vector<IsingInstance> out;
    std::uniform_int_distribution<std::size_t> size(1, 8);
    while (out.size() < count) {
        const auto g = random_graph(size(rng), 0.45, rng);
        out.push_back(random_instance(g, {0.0, 1.2, 1.5, clamp_probability}, rng));
    }
    return out;
}

} // namespace

TEST(Gibbs, SingleVertexIsFair) {
    const auto d = enumerate_gibbs(build_instance(1, {}));
    EXPECT_NEAR(d.marginal_plus(0), 0.5, 1e-15);
}

TEST(Gibbs, EdgeAgreementProbability) {
    for (double beta : {0.0, 0.3, 1.0, 2.5}) {
        const auto d = enumerate_gibbs(build_instance(2, {{0, 1, beta}}));
        // States: bit0 = vertex 0, bit1 = vertex 1; agreeing states are 0 and 3.
        EXPECT_NEAR(d.probabilities[0] + d.probabilities[3], std::exp(beta) / (std::exp(beta) + std::exp(-beta)), 1e-14);
    }
}

TEST(Gibbs, ZeroCouplingFactorizes) {
    const std::vector<double> h{0.3, -1.2, 0.0, 2.0};
    std::vector<vertex_field> fields;
    for (vertex v = 0; v < 4; ++v) fields.push_back({v, Field::finite(h[v])});
    const auto d = enumerate_gibbs(build_instance(4, {{0, 1, 0.0}, {1, 2, 0.0}, {2, 3, 0.0}}, fields));
    for (std::uint64_t s = 0; s < 16; ++s) {
        double p = 1;
        for (vertex v = 0; v < 4; ++v) p *= (s >> v) & 1 ? logistic(2 * h[v]) : 1 - logistic(2 * h[v]);
        EXPECT_NEAR(d.probabilities[s], p, 1e-14);
    }
}

TEST(Gibbs, NormalizedAndMatchesBruteForce) {
    for (const auto& inst : oracle_instances(150, 1)) {
        const auto d = enumerate_gibbs(inst);
        double total = 0;
        for (double p : d.probabilities) {
            total += p;
            EXPECT_GT(p, 0.0);
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        const auto brute = brute_gibbs(inst);
        for (std::uint64_t c = 0; c < brute.size(); ++c)
            if (respects_clamps(inst, c)) {
                EXPECT_NEAR(d.probabilities[reduced_state(inst, c)], brute[c], 1e-12);
            }
    }
}

TEST(Gibbs, LargeFieldsStayFinite) {
    const auto inst = build_instance(3, {{0, 1, 40.0}, {1, 2, 40.0}}, {{0, Field::finite(900)}, {2, Field::finite(-900)}});
    const auto d = enumerate_gibbs(inst);
    EXPECT_TRUE(std::isfinite(d.log_Z));
    double total = 0;
    for (double p : d.probabilities) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Gibbs, CapIsEnforced) {
    EXPECT_THROW(enumerate_gibbs(IsingInstance::uniform(gen_path(17), 0.1)), size_cap_exceeded);
    EXPECT_NO_THROW(enumerate_gibbs(IsingInstance::uniform(gen_path(17), 0.1), 17));
}

TEST(Conditional, PathDecayIsTanhPower) {
    for (double beta : {0.2, 0.7, 1.3})
        for (std::size_t k = 1; k <= 10; ++k) {
            const auto inst = IsingInstance::uniform(gen_path(k + 1), beta);
            const std::vector<vertex> lambda{0};
            const double gap = conditional_marginal(inst, static_cast<vertex>(k), lambda, std::vector<spin>{1}) -
                               conditional_marginal(inst, static_cast<vertex>(k), lambda, std::vector<spin>{-1});
            EXPECT_NEAR(gap, std::pow(std::tanh(beta), static_cast<double>(k)), 1e-12);
        }
}

TEST(Conditional, EmptyConditioningIsMarginal) {
    for (const auto& inst : oracle_instances(40, 2)) {
        const auto d = enumerate_gibbs(inst);
        for (std::size_t i = 0; i < d.sites.size(); ++i)
            EXPECT_NEAR(conditional_marginal(inst, d.sites[i], std::vector<vertex>{}, std::vector<spin>{}), d.marginal_plus(i), 1e-12);
    }
}

TEST(Conditional, StarCenterAtZeroCoupling) {
    const auto inst = IsingInstance::uniform(gen_star(4), 0.0);
    EXPECT_NEAR(conditional_marginal(inst, 0, {1, 2, 3, 4}, {1, 1, 1, 1}), 0.5, 1e-15);
}

TEST(Conditional, MatchesBruteForce) {
    std::mt19937_64 rng(3);
    for (const auto& inst : oracle_instances(100, 4)) {
        const std::size_t n = inst.num_vertices();
        if (n < 2) continue;
        const vertex v = static_cast<vertex>(rng() % n);
        std::vector<vertex> lambda;
        std::vector<spin> eta;
        std::vector<int> eta_int;
        for (vertex u = 0; u < n; ++u) {
            if (u == v || rng() % 3 != 0) continue;
            const spin s = inst.is_clamped(u) ? inst.field(u).clamp_sign() : (rng() % 2 ? 1 : -1);
            lambda.push_back(u);
            eta.push_back(s);
            eta_int.push_back(s);
        }
        EXPECT_NEAR(conditional_marginal(inst, v, lambda, eta), brute_conditional(inst, v, lambda, eta_int), 1e-10);
    }
}

TEST(Conditional, MonotoneInBoundary) {
    std::mt19937_64 rng(5);
    for (const auto& inst : oracle_instances(150, 6, 0.0)) {
        const std::size_t n = inst.num_vertices();
        if (n < 2) continue;
        const vertex v = static_cast<vertex>(rng() % n);
        std::vector<vertex> lambda;
        for (vertex u = 0; u < n; ++u)
            if (u != v && rng() % 2) lambda.push_back(u);
        std::vector<spin> lo(lambda.size()), hi(lambda.size());
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            lo[i] = rng() % 2 ? 1 : -1;
            hi[i] = lo[i] > 0 ? 1 : (rng() % 2 ? 1 : -1);
        }
        EXPECT_GE(conditional_marginal(inst, v, lambda, hi) + 1e-15, conditional_marginal(inst, v, lambda, lo));
    }
}

TEST(Conditional, RejectsBadConditioning) {
    const auto inst = build_instance(3, {{0, 1, 0.5}, {1, 2, 0.5}}, {{0, Field::plus_infinity()}});
    EXPECT_THROW(conditional_marginal(inst, 1, {0}, {-1}), invalid_input);
    EXPECT_NO_THROW(conditional_marginal(inst, 1, {0}, {1}));
    EXPECT_THROW(conditional_marginal(inst, 1, {1}, {1}), invalid_input);
}

TEST(Transition, SingleFreeVertex) {
    const auto t = transition_matrix(build_instance(1, {}));
    EXPECT_NEAR(t.kernel(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(t.kernel(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(t.gap, 1.0, 1e-12);
    EXPECT_EQ(exact_mixing_time(t, enumerate_gibbs(build_instance(1, {}))), 1u);
}

TEST(Transition, TwoIsolatedVertices) {
    const auto t = transition_matrix(build_instance(2, {}));
    const std::vector<double> expected{1, 0.5, 0.5, 0};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(t.eigenvalues[i], expected[i], 1e-12);
    EXPECT_NEAR(t.gap, 0.5, 1e-12);
}

TEST(Transition, EdgeSpectrumClosedForm) {
    // For one edge the kernel has eigenvalues 1, p, 1 - p, 0 with p = logistic(2 beta).
    for (double beta : {0.0, 0.4, 1.0, 3.0}) {
        const auto t = transition_matrix(build_instance(2, {{0, 1, beta}}));
        const double p = 1 / (1 + std::exp(-2 * beta));
        std::vector<double> expected{1, p, 1 - p, 0};
        std::sort(expected.rbegin(), expected.rend());
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(t.eigenvalues[i], expected[i], 1e-12);
    }
}

TEST(Transition, EdgeAtUnitCoupling) {
    const auto inst = build_instance(2, {{0, 1, 1.0}});
    const auto t = transition_matrix(inst);
    const auto d = enumerate_gibbs(inst);
    EXPECT_NEAR(t.lambda2(), 0.880797077977882, 1e-12);
    EXPECT_NEAR(t.relaxation_time, 8.38905609893065, 1e-10);
    EXPECT_EQ(exact_mixing_time(t, d), 8u);

    const auto K = brute_kernel(inst);
    const auto pi = brute_gibbs(inst);
    const auto starts = allowed_configs(inst);
    EXPECT_GT(brute_tv_after(K, pi, 7, starts), mixing_threshold);
    EXPECT_LE(brute_tv_after(K, pi, 8, starts), mixing_threshold);

    const double tc = exact_continuous_mixing_time(t, d);
    EXPECT_NEAR(tc, 4.194837, 3e-4);
    EXPECT_GT(brute_continuous_tv(K, pi, 2 * (tc - 1.0 / 4096), starts), mixing_threshold);
    EXPECT_LE(brute_continuous_tv(K, pi, 2 * tc, starts), mixing_threshold);
}

TEST(Transition, KernelMatchesBruteForce) {
    for (const auto& inst : oracle_instances(80, 7)) {
        const auto t = transition_matrix(inst);
        const auto K = brute_kernel(inst);
        for (auto x : allowed_configs(inst))
            for (auto y : allowed_configs(inst))
                EXPECT_NEAR(t.kernel(static_cast<Eigen::Index>(reduced_state(inst, x)),
                                     static_cast<Eigen::Index>(reduced_state(inst, y))),
                            K[x][y], 1e-14);
    }
}

TEST(Transition, ReversibleStationaryAndContracting) {
    for (const auto& inst : oracle_instances(150, 8)) {
        const auto t = transition_matrix(inst);
        const auto d = enumerate_gibbs(inst);
        EXPECT_LE(detailed_balance_defect(t, d), 1e-12);
        for (Eigen::Index y = 0; y < t.kernel.cols(); ++y) {
            double s = 0;
            for (Eigen::Index x = 0; x < t.kernel.rows(); ++x) s += d.probabilities[static_cast<std::size_t>(x)] * t.kernel(x, y);
            EXPECT_NEAR(s, d.probabilities[static_cast<std::size_t>(y)], 1e-10);
        }
        for (double l : t.eigenvalues) EXPECT_LE(std::abs(l), 1 + 1e-12);
        EXPECT_NEAR(t.eigenvalues[0], 1.0, 1e-12);
    }
}

TEST(Transition, MatrixCapIsEnforced) {
    EXPECT_THROW(transition_matrix(IsingInstance::uniform(gen_path(13), 0.1)), size_cap_exceeded);
}

TEST(MixingTime, MatchesStepwiseOracle) {
    for (const auto& inst : oracle_instances(40, 9)) {
        if (inst.free_vertices().empty()) continue;
        const auto t = transition_matrix(inst);
        const auto m = exact_mixing_time(t, enumerate_gibbs(inst));
        const auto K = brute_kernel(inst);
        const auto pi = brute_gibbs(inst);
        const auto starts = allowed_configs(inst);
        EXPECT_LE(brute_tv_after(K, pi, m, starts), mixing_threshold);
        if (m > 0) {
            EXPECT_GT(brute_tv_after(K, pi, m - 1, starts), mixing_threshold);
        }
    }
}

// The discrete-time spectral sandwich as commonly quoted: tau <= t_mix <= tau (1 + log(1/pi_min) / 2).
TEST(MixingTime, DiscreteSpectralSandwich) {
    std::size_t lower_violations = 0;
    for (const auto& inst : oracle_instances(150, 10)) {
        if (inst.free_vertices().empty()) continue;
        const auto t = transition_matrix(inst);
        const auto d = enumerate_gibbs(inst);
        const double m = static_cast<double>(exact_mixing_time(t, d));
        lower_violations += t.relaxation_time > m;
        EXPECT_LE(m, t.relaxation_time * (1 - 0.5 * d.min_log_probability()) + 1e-9);
    }
    EXPECT_EQ(lower_violations, 0u);
}

TEST(MixingTime, DiscreteLowerBoundWithUnitSlack) {
    for (const auto& inst : oracle_instances(150, 10)) {
        if (inst.free_vertices().empty()) continue;
        const auto t = transition_matrix(inst);
        const auto d = enumerate_gibbs(inst);
        EXPECT_LE(t.relaxation_time - 1, static_cast<double>(exact_mixing_time(t, d)));
    }
}

TEST(MixingTime, ContinuousSpectralSandwich) {
    for (const auto& inst : oracle_instances(100, 11)) {
        if (inst.free_vertices().empty()) continue;
        const auto t = transition_matrix(inst);
        const auto d = enumerate_gibbs(inst);
        const double m = exact_continuous_mixing_time(t, d);
        const double tau = t.continuous_relaxation_time();
        EXPECT_LE(tau, m + 1e-9);
        EXPECT_LE(m, tau * (1 - 0.5 * d.min_log_probability()) + 1.0 / 4096);
    }
}

TEST(MixingTime, ContinuousKernelMatchesUniformization) {
    for (const auto& inst : oracle_instances(30, 12)) {
        if (inst.free_vertices().empty()) continue;
        const auto t = transition_matrix(inst);
        const auto d = enumerate_gibbs(inst);
        const auto K = brute_kernel(inst);
        const auto pi = brute_gibbs(inst);
        const auto starts = allowed_configs(inst);
        for (double time : {0.1, 1.0, 3.7})
            EXPECT_NEAR(continuous_tv(t, d, time),
                        brute_continuous_tv(K, pi, static_cast<double>(inst.num_vertices()) * time, starts), 1e-10);
    }
}

TEST(Dirichlet, SecondEigenfunctionAttainsRelaxationTime) {
    for (const auto& inst : oracle_instances(60, 13, 0.0)) {
        if (inst.free_vertices().size() < 2) continue;
        const auto t = transition_matrix(inst);
        const auto d = enumerate_gibbs(inst);
        const std::vector<std::vector<double>> fs{second_eigenfunction(t, d)};
        const auto r = dirichlet_check(t, d, fs);
        EXPECT_TRUE(r.ok);
        EXPECT_NEAR(r.ratios[0], t.relaxation_time, 1e-8 * t.relaxation_time);
    }
}

TEST(Dirichlet, RandomMeanZeroFunctionsAreBounded) {
    std::mt19937_64 rng(14);
    std::normal_distribution<double> z;
    for (const auto& inst : oracle_instances(60, 15)) {
        if (inst.free_vertices().empty()) continue;
        const auto t = transition_matrix(inst);
        const auto d = enumerate_gibbs(inst);
        std::vector<std::vector<double>> fs;
        for (int k = 0; k < 5; ++k) {
            std::vector<double> f(d.num_states());
            double mean = 0;
            for (std::size_t x = 0; x < f.size(); ++x) mean += d.probabilities[x] * (f[x] = z(rng));
            for (auto& x : f) x -= mean;
            fs.push_back(f);
        }
        const auto r = dirichlet_check(t, d, fs);
        EXPECT_TRUE(r.ok);
        for (double ratio : r.ratios) EXPECT_LE(ratio, t.relaxation_time * (1 + 1e-9));
    }
}

TEST(Dirichlet, RejectsConstantAndBiasedFunctions) {
    const auto inst = build_instance(2, {{0, 1, 0.5}});
    const auto t = transition_matrix(inst);
    const auto d = enumerate_gibbs(inst);
    EXPECT_THROW(dirichlet_check(t, d, std::vector<std::vector<double>>{{1, 1, 1, 1}}), invalid_input);
    EXPECT_THROW(dirichlet_check(t, d, std::vector<std::vector<double>>{{1, 0, 0, 0}}), invalid_input);
}
