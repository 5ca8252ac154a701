#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "glauber/cutwidth.hpp"
#include "glauber/exact.hpp"
#include "test_support.hpp"

using namespace glauber;
using namespace testing_support;

namespace {

std::size_t brute_cutwidth(const Graph& g) {
    std::vector<vertex> perm(g.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = SIZE_MAX;
    do {
        std::vector<bool> placed(g.num_vertices(), false);
        std::size_t width = 0;
        for (std::size_t i = 0; i + 1 < perm.size(); ++i) {
            placed[perm[i]] = true;
            std::size_t cut = 0;
            for (const auto& e : g.edges()) cut += placed[e.u] != placed[e.v];
            width = std::max(width, cut);
        }
        best = std::min(best, width);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return g.num_vertices() == 0 ? 0 : best;
}

// Recursive bound computed top-down on a rooted tree.
std::size_t recursive_tree_bound(const Graph& t, vertex v, vertex parent) {
    std::vector<std::size_t> b;
    for (vertex w : t.neighbors(v))
        if (w != parent) b.push_back(recursive_tree_bound(t, w, v));
    std::sort(b.rbegin(), b.rend());
    std::size_t best = 0;
    for (std::size_t i = 1; i <= b.size(); ++i) best = std::max(best, b[i - 1] + b.size() + 1 - i);
    return best;
}

} // namespace

TEST(CutwidthExact, SmallFamilies) {
    for (std::size_t n = 2; n <= 10; ++n) EXPECT_EQ(cutwidth_exact(gen_path(n)).value, 1u);
    EXPECT_EQ(cutwidth_exact(gen_star(4)).value, 2u);
    EXPECT_EQ(cutwidth_exact(gen_complete(4)).value, 4u);
    EXPECT_EQ(cutwidth_exact(gen_cycle(6)).value, 2u);
    EXPECT_EQ(cutwidth_exact(Graph(1, std::vector<edge>{})).value, 0u);
}

TEST(CutwidthExact, CompleteGraphMiddleCut) {
    for (std::size_t n = 2; n <= 9; ++n) EXPECT_EQ(cutwidth_exact(gen_complete(n)).value, (n / 2) * ((n + 1) / 2));
}

TEST(CutwidthExact, MatchesExhaustiveSearch) {
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 200; ++rep) {
        const auto g = random_graph(1 + rng() % 7, 0.2 + 0.6 * (rng() % 100) / 100.0, rng);
        const auto r = cutwidth_exact(g);
        EXPECT_EQ(r.value, brute_cutwidth(g));
        EXPECT_EQ(ordering_width(g, r.ordering), r.value);
        EXPECT_EQ(r.kind, cutwidth_kind::exact);
    }
}

TEST(CutwidthExact, SizeCap) {
    EXPECT_THROW(cutwidth_exact(gen_path(21)), size_cap_exceeded);
    EXPECT_THROW(cutwidth_exact(gen_path(9), 8), size_cap_exceeded);
}

TEST(OrderingWidth, RejectsNonPermutations) {
    EXPECT_THROW(ordering_width(gen_path(3), {0, 1}), invalid_input);
    EXPECT_THROW(ordering_width(gen_path(3), {0, 1, 1}), invalid_input);
    EXPECT_EQ(ordering_width(gen_star(3), {1, 2, 0, 3}), 2u);
}

TEST(TreeBound, BaseCases) {
    EXPECT_EQ(tree_cutwidth_ordering(Graph(1, std::vector<edge>{})).value, 0u);
    const auto star = tree_cutwidth_ordering(gen_star(3));
    EXPECT_EQ(star.value, 3u);
    EXPECT_EQ(star.kind, cutwidth_kind::tree_bound);
    EXPECT_EQ(cutwidth_exact(gen_star(3)).value, 2u);
    EXPECT_THROW(tree_cutwidth_ordering(gen_cycle(4)), invalid_input);
}

TEST(TreeBound, SoundAndMatchesRecursiveFormula) {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 200; ++rep) {
        const auto t = random_tree(1 + rng() % 12, rng);
        const auto r = tree_cutwidth_ordering(t, 0);
        EXPECT_EQ(r.value, recursive_tree_bound(t, 0, no_vertex));
        EXPECT_GE(r.value, cutwidth_exact(t).value);
        EXPECT_LE(ordering_width(t, r.ordering), r.value);
        EXPECT_EQ(r.ordering.front(), 0u);
    }
}

TEST(TreeBound, ForestTakesMaximumOverComponents) {
    const Graph forest(7, std::vector<edge>{{0, 1}, {2, 3}, {2, 4}, {2, 5}});
    const auto r = tree_cutwidth_ordering(forest);
    EXPECT_EQ(r.value, 3u);
    EXPECT_EQ(r.ordering.size(), 7u);
}

TEST(GaltonWatsonCutwidth, DepthZeroIsZero) {
    const auto s = gw_cutwidth_stats(3.0, 0, 100, 1);
    for (auto b : s.tree_bound) EXPECT_EQ(b, 0u);
    EXPECT_THROW(gw_cutwidth_stats(3.0, 2, 99, 1), invalid_input);
}

TEST(GaltonWatsonCutwidth, BoundDominatesExactAndIsThreadInvariant) {
    const auto a = gw_cutwidth_stats(2.0, 3, 400, 7, 1);
    const auto b = gw_cutwidth_stats(2.0, 3, 400, 7, 4);
    EXPECT_EQ(a.tree_bound, b.tree_bound);
    EXPECT_EQ(a.exact_mismatches, 0u);
    EXPECT_GT(std::count_if(a.exact.begin(), a.exact.end(), [](long x) { return x >= 0; }), 100);
}

TEST(GaltonWatsonCutwidth, MeanGrowsWithDepth) {
    double prev = -1;
    for (std::size_t depth = 1; depth <= 5; ++depth) {
        const auto s = gw_cutwidth_stats(3.0, depth, 500, 8);
        EXPECT_GT(s.mean_bound, prev);
        prev = s.mean_bound;
    }
}

TEST(OrderStatistic, NonNegativeWithAtomAtZero) {
    const double d = 3.0;
    const auto w = order_stat_bound_sample(d, 20000, 9);
    EXPECT_TRUE(std::all_of(w.begin(), w.end(), [](long x) { return x >= 0; }));
    const auto zeros = static_cast<double>(std::count(w.begin(), w.end(), 0L));
    // P(W = 0) >= P(X = 0).
    EXPECT_GE(zeros / 20000.0, std::exp(-d) - 3 * std::sqrt(std::exp(-d) / 20000.0));
    EXPECT_THROW(order_stat_bound_sample(d, 9999, 1), invalid_input);
}

TEST(OrderStatistic, ShiftedPoissonDomination) {
    const auto w = order_stat_bound_sample(3.0, 20000, 10);
    const auto t = calibrate_shift(w, 3.0, 15);
    EXPECT_TRUE(t.pass);
    EXPECT_LE(tail_excess(w, 3.0, static_cast<double>(t.shift), 15), 0.0);
    if (t.shift > 0) {
        EXPECT_GT(tail_excess(w, 3.0, static_cast<double>(t.shift - 1), 15), 0.0);
    }
}

TEST(Bounds, Formulas) {
    EXPECT_DOUBLE_EQ(relaxation_bound(2, 0, 5, 3), 4.0);
    EXPECT_DOUBLE_EQ(relaxation_bound(3, 1, 1, 2), 9 * std::exp(12.0));
    EXPECT_DOUBLE_EQ(mixing_bound_cutwidth(1, 0, 7, 7), 80.0);
    EXPECT_NEAR(log_mixing_bound_cutwidth(4, 0.3, 2, 3), std::log(mixing_bound_cutwidth(4, 0.3, 2, 3)), 1e-12);
    EXPECT_THROW(relaxation_bound(-1, 0, 0, 0), invalid_input);
    EXPECT_THROW(mixing_bound_cutwidth(1, -0.1, 0, 0), invalid_input);
}

TEST(Bounds, MonotoneInEachArgument) {
    const std::vector<double> base{3, 0.4, 2, 3};
    for (std::size_t arg = 0; arg < 4; ++arg) {
        auto hi = base;
        hi[arg] += 0.5;
        EXPECT_GE(relaxation_bound(hi[0], hi[1], hi[2], hi[3]), relaxation_bound(base[0], base[1], base[2], base[3]));
        EXPECT_GE(mixing_bound_cutwidth(hi[0], hi[1], hi[2], hi[3]),
                  mixing_bound_cutwidth(base[0], base[1], base[2], base[3]));
    }
}

TEST(Bounds, DominateExactValues) {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 60; ++rep) {
        const auto g = random_graph(1 + rng() % 7, 0.5, rng);
        const double h = rep % 3 == 0 ? 1000.0 : 2.0;
        const auto inst = random_instance(g, {0.0, 1.0, h, 0.15}, rng);
        if (inst.free_vertices().empty()) continue;
        const auto t = transition_matrix(inst);
        const auto d = enumerate_gibbs(inst);
        const double n = static_cast<double>(g.num_vertices()), E = static_cast<double>(cutwidth_exact(g).value);
        const double deg = static_cast<double>(g.max_degree());
        EXPECT_GE(relaxation_bound(n, inst.beta_max(), E, deg), t.relaxation_time);
        EXPECT_GE(mixing_bound_cutwidth(n, inst.beta_max(), E, deg), exact_continuous_mixing_time(t, d));
    }
}
