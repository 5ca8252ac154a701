#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "glauber/certifier.hpp"
#include "test_support.hpp"

using namespace glauber;
using namespace testing_support;

namespace {

std::size_t scan_radius(double d, double beta) {
    const double t = std::tanh(beta);
    for (std::size_t R = 1;; ++R)
        if (d * std::pow(d - 1, static_cast<double>(R) - 1) * std::pow(t, static_cast<double>(R)) / (1 - (d - 1) * t) <= 0.25)
            return R;
}

// Random tree with maximum degree at most d, plus `extra` chords between
// vertices that still have spare degree.
Graph bounded_degree_graph(std::size_t n, std::size_t d, std::size_t extra, std::mt19937_64& rng) {
    std::vector<edge> edges;
    std::vector<std::size_t> deg(n, 0);
    for (vertex v = 1; v < n; ++v) {
        vertex p;
        do p = static_cast<vertex>(rng() % v);
        while (deg[p] >= d);
        edges.push_back({p, v});
        ++deg[p];
        ++deg[v];
    }
    for (std::size_t tries = 0; extra > 0 && tries < 1000; ++tries) {
        const auto a = static_cast<vertex>(rng() % n), b = static_cast<vertex>(rng() % n);
        if (a == b || deg[a] >= d || deg[b] >= d) continue;
        if (std::any_of(edges.begin(), edges.end(), [&](const edge& e) {
                return (e.u == a && e.v == b) || (e.u == b && e.v == a);
            }))
            continue;
        edges.push_back({a, b});
        ++deg[a];
        ++deg[b];
        --extra;
    }
    return Graph(n, edges);
}

} // namespace

TEST(Threshold, Examples) {
    EXPECT_TRUE(threshold_check(3, 0.5));
    EXPECT_FALSE(threshold_check(3, 0.6));
    for (double d : {2.0, 3.0, 10.0, 100.0}) EXPECT_TRUE(threshold_check(d, 0.0));
    EXPECT_THROW(threshold_check(3, -0.1), invalid_input);
}

TEST(Threshold, RadiusMatchesDirectScan) {
    EXPECT_EQ(main_threshold_radius(2, 0.5), 4u);
    for (double d : {2.0, 3.0, 4.0})
        for (double beta : {0.05, 0.2, 0.3}) {
            if (!threshold_check(d, beta)) continue;
            EXPECT_EQ(main_threshold_radius(d, beta), scan_radius(d, beta));
        }
    EXPECT_EQ(main_threshold_radius(3, 1e-4), 1u);
    EXPECT_THROW(main_threshold_radius(3, 0.6), invalid_input);
}

TEST(Threshold, BoundedDegreeConstants) {
    const auto c = theorem1_constants(2, 0.5);
    EXPECT_EQ(c.R, 4u);
    EXPECT_DOUBLE_EQ(c.X, 9.0);
    EXPECT_NEAR(c.log_T, std::log(80.0 * 8 * 729) + 50.0, 1e-12);
    for (double d : {2.0, 3.0, 5.0})
        for (double beta : {0.01, 0.1, 0.2}) {
            const auto k = theorem1_constants(d, beta);
            EXPECT_GE(k.X, d + 1);
            EXPECT_TRUE(std::isfinite(k.log_T));
        }
}

TEST(Verify, CycleBelowThresholdPasses) {
    const auto inst = IsingInstance::uniform(gen_cycle(8), 0.3);
    const auto R = main_threshold_radius(2, 0.3);
    const auto r = verify_conditions(inst, R, lm_mode::exact);
    EXPECT_TRUE(r.all_pass) << r.failure;
    for (const auto& c : r.per_vertex) {
        EXPECT_TRUE(c.vol && c.lm && c.sm);
        EXPECT_EQ(c.volume, 2 * R + 1);
    }
    EXPECT_EQ(auto_radius(inst, 10), R);
}

TEST(Verify, ZeroCouplingPassesSpatialMixing) {
    const auto r = verify_conditions(IsingInstance::uniform(gen_complete(5), 0.0), 1, lm_mode::exact);
    for (const auto& c : r.per_vertex) {
        EXPECT_TRUE(c.sm);
        EXPECT_EQ(c.sum_a_u, 0.0);
    }
    EXPECT_TRUE(r.all_pass);
}

TEST(Verify, StrongCliqueFailsEverywhere) {
    const auto inst = IsingInstance::uniform(gen_complete(5), 2.0);
    const auto r = verify_conditions(inst, 1, lm_mode::exact);
    EXPECT_FALSE(r.all_pass);
    for (const auto& c : r.per_vertex) EXPECT_FALSE(c.sm);
    EXPECT_THROW(certified_bound(r, 5), certification_refused);
    // At R = 2 every ball is the whole clique and the sphere is empty.
    EXPECT_EQ(auto_radius(inst, 3), 2u);
    EXPECT_FALSE(auto_radius(inst, 1).has_value());
}

TEST(Verify, ShortCircuitStopsAtFirstFailure) {
    certify_options opt;
    opt.R = 1;
    opt.full_report = false;
    const auto r = verify_conditions(IsingInstance::uniform(gen_complete(5), 2.0), opt);
    EXPECT_FALSE(r.all_pass);
    EXPECT_TRUE(r.per_vertex[0].evaluated);
    EXPECT_FALSE(r.per_vertex[1].evaluated);
}

TEST(Verify, ExtremalModeIsFlaggedAndNoSlowerThanExhaustive) {
    const auto inst = IsingInstance::uniform(gen_cycle(8), 0.3);
    const auto ex = verify_conditions(inst, 2, lm_mode::exact);
    const auto fast = verify_conditions(inst, 2, lm_mode::exact_extremal);
    EXPECT_TRUE(fast.heuristic);
    EXPECT_FALSE(ex.heuristic);
    EXPECT_LE(fast.log_T, ex.log_T + 1e-12);
}

TEST(Verify, LocalMixingMatchesDirectComputation) {
    // Path 0-1-2-3-4 at R = 2 around vertex 2: interior {1,2,3}, sphere {0,4}.
    const auto inst = IsingInstance::uniform(gen_path(5), 0.7);
    const auto r = verify_conditions(inst, 2, lm_mode::exact);
    double worst = 0;
    for (spin a : {-1, 1})
        for (spin b : {-1, 1}) {
            const auto sub = build_instance(3, {{0, 1, 0.7}, {1, 2, 0.7}}, {{0, Field::finite(0.7 * a)}, {2, Field::finite(0.7 * b)}});
            const auto t = transition_matrix(sub);
            worst = std::max(worst, exact_continuous_mixing_time(t, enumerate_gibbs(sub)));
        }
    EXPECT_NEAR(r.per_vertex[2].log_lm_time, std::log(worst), 1e-12);
    EXPECT_EQ(r.per_vertex[2].boundary_configs, 4u);
}

TEST(Certified, Formula) {
    const auto c = certified_bound(1.0, 1.0, 2);
    EXPECT_NEAR(c.continuous, 12.0, 1e-12);
    EXPECT_NEAR(c.gap, std::log(2.0) / 3, 1e-15);
    EXPECT_EQ(c.discrete, 120.0);
}

TEST(Certified, SoundOnSmallInstances) {
    std::mt19937_64 rng(3);
    std::size_t certified = 0;
    for (int rep = 0; rep < 120 && certified < 25; ++rep) {
        const auto g = random_connected_graph(3 + rng() % 6, 0.15, rng);
        const auto inst = random_instance(g, {0.0, 0.35, 1.0, 0.1}, rng);
        if (inst.free_vertices().empty()) continue;
        const auto R = auto_radius(inst, 4);
        if (!R) continue;
        const auto report = verify_conditions(inst, *R, lm_mode::exact);
        if (!report.all_pass) continue;
        const auto cert = certified_bound(report, inst.num_vertices());
        const auto t = transition_matrix(inst);
        const auto d = enumerate_gibbs(inst);
        EXPECT_LE(continuous_tv(t, d, cert.continuous), mixing_threshold);
        EXPECT_GE(t.continuous_gap(), cert.gap);
        ++certified;
    }
    EXPECT_GE(certified, 10u);
}

TEST(BoundedDegree, PipelinePassesOnBoundedDegreeGraphs) {
    std::mt19937_64 rng(4);
    for (const auto& [d, beta] : std::vector<std::pair<std::size_t, double>>{{2, 0.8}, {3, 0.2}, {3, 0.4}, {4, 0.15}}) {
        ASSERT_TRUE(threshold_check(static_cast<double>(d), beta));
        for (int rep = 0; rep < 5; ++rep) {
            const auto g = bounded_degree_graph(20 + rng() % 20, d, rep % 3, rng);
            ASSERT_LE(g.max_degree(), d);
            const auto r = theorem1_conditions(IsingInstance::uniform(g, beta), static_cast<double>(d), beta);
            EXPECT_TRUE(r.all_pass) << "d=" << d << " beta=" << beta << ": " << r.failure;
        }
    }
}
