#include "squidfan/fanin_analytics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace squidfan;

namespace
{
// Threshold fraction rebuilt from its circuit ingredients: 2 L_tot (Ic - Ib) / Φ0
// with L_tot = washer + L_j(0) + (π/2) L_j(0), everything in units of Φ0/Ic.
double fraction_from_inductances(double bias_ratio)
{
    const double washer = 0.5;
    const double lj0    = 1.0 / (2.0 * std::numbers::pi);
    const double l_tot  = washer + lj0 + std::numbers::pi / 2.0 * lj0;
    return 2.0 * l_tot * (1.0 - bias_ratio);
}
} // namespace

TEST(SynapseFluxQuota, SplitsHalfQuantumAcrossInputs)
{
    EXPECT_DOUBLE_EQ(synapse_flux_quota(TreeTopology{1, 1}), 0.5);
    EXPECT_DOUBLE_EQ(synapse_flux_quota(TreeTopology{2, 3}), 0.25);
    EXPECT_NEAR(synapse_flux_quota(TreeTopology{22, 1}), 0.022727, 1e-6);
}

TEST(PointActivityFraction, TypicalAndAggressiveBias)
{
    EXPECT_NEAR(point_activity_fraction(BiasPoint{0.7}), 0.55, 0.005);
    EXPECT_NEAR(point_activity_fraction(BiasPoint{0.9}), 0.18, 0.005);
    EXPECT_NEAR(point_activity_fraction(BiasPoint{0.7}), 0.5455, 1e-4);
    EXPECT_NEAR(point_activity_fraction(BiasPoint{0.9}), 0.1818, 1e-4);
    EXPECT_EQ(point_activity_fraction(BiasPoint{1.0}), 0.0);
}

TEST(PointActivityFraction, MatchesInductanceDerivation)
{
    for (double b = 0.0; b <= 1.0; b += 0.05)
        EXPECT_NEAR(point_activity_fraction(BiasPoint{b}), fraction_from_inductances(b), 1e-14) << b;
}

TEST(PointActivityFraction, StrictlyDecreasingInBias)
{
    double previous = point_activity_fraction(BiasPoint{0.0});
    for (int i = 1; i <= 1000; ++i)
    {
        const double f = point_activity_fraction(BiasPoint{i / 1000.0});
        EXPECT_LT(f, previous);
        previous = f;
    }
}

TEST(PointActivityFraction, UnreachableBelowBoundaryBias)
{
    const double boundary = 1.0 - 2.0 * std::numbers::pi / (3.0 * std::numbers::pi + 2.0);
    EXPECT_NEAR(boundary, 0.45, 0.001);
    EXPECT_GT(point_activity_fraction(BiasPoint{boundary - 1e-6}), 1.0);
    EXPECT_LT(point_activity_fraction(BiasPoint{boundary + 1e-6}), 1.0);
    EXPECT_FALSE(activity_result(BiasPoint{0.3}, 10).reachable);
    EXPECT_TRUE(activity_result(BiasPoint{0.5}, 10).reachable);
}

TEST(BiasPoint, RejectsOutOfRange)
{
    EXPECT_THROW(BiasPoint{-0.1}, ArgumentError);
    EXPECT_THROW(BiasPoint{1.01}, ArgumentError);
}

TEST(ActivityResult, CeilingOfContinuousCount)
{
    const auto r = activity_result(BiasPoint{0.7}, 10);
    EXPECT_TRUE(r.reachable);
    EXPECT_EQ(r.p_integer, 6u); // ceil(5.455)
    EXPECT_EQ(activity_result(BiasPoint{0.9}, 2).p_integer, 1u);
    EXPECT_EQ(activity_result(BiasPoint{0.99}, 3).p_integer, 1u);
    EXPECT_EQ(activity_result(BiasPoint{1.0}, 7).p_integer, 0u);
}

TEST(MinActiveInputs, ExactProductCountsAsReached)
{
    // n * f lands on an integer up to rounding noise.
    const double f = 3.0 / 7.0;
    EXPECT_EQ(min_active_inputs(7, f), 3u);
    EXPECT_EQ(min_active_inputs(7, f * (1 + 1e-13)), 3u);
    EXPECT_EQ(min_active_inputs(7, f * (1 + 1e-6)), 4u);
}

TEST(TreeActivityFraction, TypicalOperatingPoints)
{
    EXPECT_NEAR(tree_activity_fraction(BiasPoint{0.7}, 5), 0.0483, 1e-4);
    EXPECT_NEAR(tree_activity_fraction(BiasPoint{0.9}, 3), 0.00601, 1e-5);
    EXPECT_LT(tree_activity_fraction(BiasPoint{0.9}, 3), 0.01);
}

TEST(TreeActivityFraction, DepthOneIsPointNeuron)
{
    for (double b : {0.0, 0.3, 0.7, 0.95, 1.0})
        EXPECT_EQ(tree_activity_fraction(BiasPoint{b}, 1), point_activity_fraction(BiasPoint{b}));
}

TEST(TreeActivityFraction, PowerOfPointFraction)
{
    std::mt19937 rng{7};
    std::uniform_real_distribution< double > bias(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        const BiasPoint b{bias(rng)};
        for (unsigned h = 1; h <= 10; ++h)
            EXPECT_NEAR(tree_activity_fraction(b, h), std::pow(point_activity_fraction(b), h),
                        1e-15 * std::max(1.0, std::pow(point_activity_fraction(b), h)));
    }
}

TEST(TreeActivityFraction, MonotoneInDepth)
{
    for (double b = 0.46; b < 1.0; b += 0.01)
        for (unsigned h = 1; h < 10; ++h)
            EXPECT_LT(tree_activity_fraction(BiasPoint{b}, h + 1), tree_activity_fraction(BiasPoint{b}, h));
    EXPECT_THROW(tree_activity_fraction(BiasPoint{0.7}, 0), ArgumentError);
}

TEST(TotalUnitFraction, HandEvaluatedSums)
{
    const TreeTopology tree{10, 2};
    const double p = 10.0 * point_activity_fraction(BiasPoint{0.7});
    EXPECT_NEAR(total_unit_fraction(BiasPoint{0.7}, tree, false), (1.0 + p + p * p) / 111.0, 1e-15);
    EXPECT_NEAR(total_unit_fraction(BiasPoint{0.7}, tree, false), 0.326, 1e-3);
    EXPECT_NEAR(total_unit_fraction(BiasPoint{0.7}, tree, true), 43.0 / 111.0, 1e-15);
}

TEST(TotalUnitFraction, FullActivityIsOne)
{
    const BiasPoint b{1.0 - 2.0 * std::numbers::pi / (3.0 * std::numbers::pi + 2.0)};
    EXPECT_NEAR(total_unit_fraction(b, TreeTopology{5, 3}, false), 1.0, 1e-12);
}

TEST(TotalUnitFraction, BoundedWhenReachable)
{
    for (double b = 0.46; b <= 1.0; b += 0.02)
        for (std::uint64_t n : {2u, 5u, 22u})
            for (unsigned h : {1u, 3u, 5u})
            {
                const double v = total_unit_fraction(BiasPoint{b}, TreeTopology{n, h}, false);
                EXPECT_GT(v, 0.0);
                EXPECT_LT(v, 1.0);
            }
}

TEST(TotalUnitFraction, IntegerModeUnreachable)
{
    EXPECT_THROW(total_unit_fraction(BiasPoint{0.2}, TreeTopology{10, 2}, true), UnreachableThresholdError);
    EXPECT_NO_THROW(total_unit_fraction(BiasPoint{0.2}, TreeTopology{10, 2}, false));
}

TEST(TreeTopology, ValidatesAndCountsSynapses)
{
    EXPECT_EQ(TreeTopology(2, 3).n_synapses(), 8u);
    EXPECT_EQ(TreeTopology(22, 3).n_synapses(), 10648u);
    EXPECT_THROW(TreeTopology(0, 3), ArgumentError);
    EXPECT_THROW(TreeTopology(2, 0), ArgumentError);
    EXPECT_THROW(TreeTopology(2, 64), CapacityError);
    EXPECT_NO_THROW(TreeTopology(2, 63));
}

TEST(TreeGeometry, ExactCases)
{
    const auto a = tree_geometry(8, 3);
    EXPECT_TRUE(a.exact);
    EXPECT_EQ(a.topology.n(), 2u);
    EXPECT_EQ(a.dendrite_count, 6u);

    const auto b = tree_geometry(37, 1);
    EXPECT_TRUE(b.exact);
    EXPECT_EQ(b.topology.n(), 37u);
    EXPECT_EQ(b.dendrite_count, 0u);

    const auto c = tree_geometry(10648, 3);
    EXPECT_TRUE(c.exact);
    EXPECT_EQ(c.topology.n(), 22u);
    EXPECT_EQ(c.dendrite_count, 506u);
}

TEST(TreeGeometry, NonIntegralRootIsFlagged)
{
    const auto g = tree_geometry(10000, 3);
    EXPECT_FALSE(g.exact);
    EXPECT_NEAR(g.n_real, 21.544, 1e-3);
    EXPECT_EQ(g.topology.n(), 22u);
    EXPECT_EQ(g.dendrite_count, 506u);
    EXPECT_NEAR(g.dendrite_count_real, 485.7, 0.1);
    EXPECT_FALSE(g.rounding_report.empty());
}

TEST(TreeGeometry, RoundTripOnIntegralTrees)
{
    for (std::uint64_t n = 1; n <= 40; ++n)
        for (unsigned h = 1; h <= 5; ++h)
        {
            const TreeTopology t{n, h};
            const auto g = tree_geometry(t.n_synapses(), h);
            ASSERT_TRUE(g.exact) << n << "^" << h;
            EXPECT_EQ(g.topology, t);
            EXPECT_EQ(*checked_pow(g.topology.n(), h), t.n_synapses());
        }
}
