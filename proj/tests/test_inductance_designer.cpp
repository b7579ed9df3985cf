#include "squidfan/fanin_analytics.hpp"
#include "squidfan/inductance_designer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace squidfan;

namespace
{

CollectionLoopDesign fig5a_design(std::uint64_t n, double k = 0.5)
{
    CollectionLoopDesign d;
    d.ic    = 300e-6;
    d.n     = n;
    d.l_dc1 = 10e-12;
    d.k1 = d.k2 = k;
    d.gamma = 1.0;
    return d;
}

CollectionLoopDesign random_design(std::mt19937& rng)
{
    std::uniform_int_distribution< std::uint64_t > n(2, 128);
    std::uniform_real_distribution< double > k(0.3, 0.9), ic(50e-6, 500e-6), alpha(0.0, 0.2), l_dc3(10e-12, 1e-9),
        l_dc1(1e-12, 50e-12), gamma(0.5, 2.0);
    CollectionLoopDesign d;
    d.n     = n(rng);
    d.k1    = k(rng);
    d.k2    = k(rng);
    d.ic    = ic(rng);
    d.alpha = alpha(rng);
    d.l_dc3 = l_dc3(rng);
    d.l_dc1 = l_dc1(rng);
    d.gamma = gamma(rng);
    return d;
}

// Solves n M^dr|dc M^dc|di I_sat / L^dc_tot = phi_max for L^di2 by bisection on
// the flux expression itself, without the rearranged closed form.
double ldi2_by_bisection(CollectionLoopDesign d)
{
    auto flux = [&](double l_di2) {
        const double m_dc_di = d.k1 * std::sqrt(l_di2 * d.l_dc1);
        const double m_dr_dc = d.k2 * std::sqrt(d.l_dc3 * kPhi0 / (2.0 * d.ic));
        const double l_dc    = static_cast< double >(d.n) * d.l_dc1 + d.l_dc3 + d.alpha * d.l_dc3;
        return static_cast< double >(d.n) * m_dr_dc * m_dc_di * d.gamma * d.ic / l_dc / kPhi0;
    };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 400; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (flux(mid) < d.phi_max ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST(SizeSquid, ThreeHundredMicroamps)
{
    const auto s = size_squid(300e-6);
    EXPECT_NEAR(units::to_pH(s.l_washer), 3.446, 1e-3);
    EXPECT_NEAR(units::to_pH(s.l_total), 6.27, 5e-3);
    EXPECT_GT(s.l_total, s.l_washer);
    // washer + L_j(0) + (π/2) L_j(0)
    const double lj0 = kPhi0 / (2.0 * std::numbers::pi * 300e-6);
    EXPECT_NEAR(s.l_total, s.l_washer + lj0 + std::numbers::pi / 2.0 * lj0, 1e-27);
}

TEST(SizeSquid, InverseInCriticalCurrent)
{
    const auto a = size_squid(150e-6);
    const auto b = size_squid(300e-6);
    EXPECT_NEAR(b.l_washer, a.l_washer / 2.0, 1e-27);
    EXPECT_NEAR(b.l_total, a.l_total / 2.0, 1e-27);
    EXPECT_THROW(size_squid(0.0), ArgumentError);
}

TEST(AppliedFluxCollection, ZeroAndSaturatedInputs)
{
    const auto d = with_designed_ldi2(fig5a_design(10));
    EXPECT_EQ(applied_flux_collection(d, std::vector< double >(10, 0.0)), 0.0);
    EXPECT_NEAR(applied_flux_collection(d, std::vector< double >(10, d.i_sat())), 0.5, 0.5 * 1e-12);

    std::vector< double > half(10, 0.0);
    for (std::size_t i = 0; i < 5; ++i)
        half[i] = d.i_sat();
    EXPECT_NEAR(applied_flux_collection(d, half), 0.25, 1e-12);
}

TEST(AppliedFluxCollection, InputValidation)
{
    const auto d = with_designed_ldi2(fig5a_design(4));
    EXPECT_THROW(applied_flux_collection(d, std::vector< double >(3, 0.0)), ArgumentError);
    EXPECT_THROW(applied_flux_collection(d, std::vector< double >{0, 0, 0, -1e-6}), ArgumentError);
    EXPECT_THROW(applied_flux_collection(d, std::vector< double >{0, 0, 0, d.i_sat() * 1.01}), SaturationError);
    EXPECT_THROW(applied_flux_collection(fig5a_design(4), std::vector< double >(4, 0.0)), ArgumentError);
}

TEST(DesignLdi2Collection, MatchesBisectionOfFluxCondition)
{
    std::mt19937 rng{11};
    for (int i = 0; i < 200; ++i)
    {
        const auto d = random_design(rng);
        EXPECT_NEAR(design_ldi2_collection(d), ldi2_by_bisection(d), 1e-12 * design_ldi2_collection(d));
    }
}

TEST(DesignLdi2Collection, RoundTripProperty)
{
    std::mt19937 rng{3};
    for (int i = 0; i < 1000; ++i)
    {
        const auto d = with_designed_ldi2(random_design(rng));
        const std::vector< double > saturated(d.n, d.i_sat());
        EXPECT_NEAR(applied_flux_collection(d, saturated), d.phi_max, 1e-12 * d.phi_max);
    }
}

TEST(DesignLdi2Collection, DecreasingTowardsAsymptote)
{
    for (double k : {0.5, 0.8})
    {
        double previous = design_ldi2_collection(fig5a_design(1, k));
        for (std::uint64_t n = 2; n <= 2000; ++n)
        {
            const double v = design_ldi2_collection(fig5a_design(n, k));
            EXPECT_LT(v, previous) << n;
            previous = v;
        }
        const double asymptote = ldi2_collection_asymptote(fig5a_design(1, k));
        EXPECT_GT(asymptote, 0.0);
        EXPECT_GT(previous, asymptote);
        EXPECT_NEAR(design_ldi2_collection(fig5a_design(1000000, k)), asymptote, 1e-3 * asymptote);
    }
}

TEST(DesignLdi2Collection, AsymptoteClosedForm)
{
    const auto d         = fig5a_design(1);
    const double budget  = 0.5 * kPhi0 / (0.25 * 300e-6);
    const double expect  = budget * budget * (10e-12 / 100e-12) / (kPhi0 / (2.0 * 300e-6));
    EXPECT_NEAR(ldi2_collection_asymptote(d), expect, 1e-12 * expect);
}

TEST(CheckCollectionConstraint, DetectsViolation)
{
    auto d = with_designed_ldi2(fig5a_design(8));
    EXPECT_NO_THROW(check_collection_constraint(d));
    d.l_di2 *= 1.01;
    EXPECT_THROW(check_collection_constraint(d), ConstraintViolation);
    EXPECT_THROW(threshold_fraction_circuit(d, 0.7), ConstraintViolation);
}

TEST(ThresholdFractionCircuit, EqualsCircuitFreeFraction)
{
    std::mt19937 rng{5};
    for (int i = 0; i < 200; ++i)
    {
        const auto d = with_designed_ldi2(random_design(rng));
        for (double b : {0.5, 0.7, 0.9, 0.99})
            EXPECT_NEAR(threshold_fraction_circuit(d, b), point_activity_fraction(BiasPoint{b}), 1e-9);
    }
    EXPECT_NEAR(threshold_fraction_circuit(with_designed_ldi2(fig5a_design(10)), 0.7), 0.5455, 1e-4);
}

TEST(ThresholdFractionCircuit, IndependentOfFanIn)
{
    const double a = threshold_fraction_circuit(with_designed_ldi2(fig5a_design(3)), 0.8);
    const double b = threshold_fraction_circuit(with_designed_ldi2(fig5a_design(97, 0.7)), 0.8);
    EXPECT_NEAR(a, b, 1e-12);
    EXPECT_LT(threshold_fraction_circuit(with_designed_ldi2(fig5a_design(3)), 1.0 - 1e-9), 1e-8);
}

TEST(CrosstalkCurrent, LinearAndZeroAtRest)
{
    const auto d = with_designed_ldi2(fig5a_design(10));
    EXPECT_EQ(crosstalk_current(d, 0), 0.0);
    const double one = crosstalk_current(d, 1);
    for (std::uint64_t p = 1; p <= 10; ++p)
        EXPECT_NEAR(crosstalk_current(d, p), static_cast< double >(p) * one, 1e-15 * one * static_cast< double >(p));
    EXPECT_NEAR(crosstalk_current(d, 6), 2.0 * crosstalk_current(d, 3), 1e-15 * one);
    EXPECT_THROW(crosstalk_current(d, 11), ArgumentError);
}

TEST(CrosstalkCurrent, TwoStepTransformerDerivation)
{
    CollectionLoopDesign d = fig5a_design(10);
    d.l_dc3                = 10.0 * d.l_dc1;
    d.alpha                = 0.05;
    d.l_di1                = 1e-9;
    d                      = with_designed_ldi2(d);

    // p saturated DI loops drive current into the DC loop, which couples back
    // into a silent DI loop through the same mutual inductance.
    const double m      = d.k1 * std::sqrt(d.l_di2 * d.l_dc1);
    const double l_dc   = 10.0 * d.l_dc1 + d.l_dc3 + d.alpha * d.l_dc3;
    const double i_dc   = 10.0 * m * d.i_sat() / l_dc;
    const double i_back = m * i_dc / (d.l_di1 + d.l_di2);
    EXPECT_NEAR(crosstalk_current(d, 10), i_back, 1e-12 * i_back);
}

TEST(NoCollection, SharedIcClosedForm)
{
    NoCollectionDesign d{1, 1.0, 300e-6, 300e-6, 0.0, false};
    EXPECT_NEAR(design_no_collection(d), kPhi0 / (2.0 * 300e-6), 1e-12 * kPhi0 / (2.0 * 300e-6));

    std::mt19937 rng{17};
    std::uniform_int_distribution< std::uint64_t > n(1, 10000);
    std::uniform_real_distribution< double > k(0.05, 1.0), ic(20e-6, 800e-6);
    for (int i = 0; i < 500; ++i)
    {
        const double ic_value = ic(rng);
        NoCollectionDesign r{n(rng), k(rng), ic_value, ic_value, 0.0, false};
        const double closed = no_collection_shared_ic(r.n, r.k, ic_value);
        EXPECT_NEAR(design_no_collection(r, 0.5), closed, 1e-12 * closed);
    }
}

TEST(NoCollection, InverseInFanIn)
{
    NoCollectionDesign a{10, 0.5, 300e-6, 300e-6, 0.0, false};
    NoCollectionDesign b = a;
    b.n                  = 20;
    EXPECT_NEAR(design_no_collection(b), design_no_collection(a) / 2.0, 1e-12 * design_no_collection(a));
}

TEST(NoCollection, ExplicitWasherSegment)
{
    NoCollectionDesign d{4, 0.5, 300e-6, 300e-6, washer_segment(4, 300e-6), false};
    NoCollectionDesign implicit = d;
    implicit.l_dr1              = 0.0;
    EXPECT_DOUBLE_EQ(design_no_collection(d), design_no_collection(implicit));
    EXPECT_NEAR(washer_segment(4, 300e-6) * 4.0, kPhi0 / (2.0 * 300e-6), 1e-27);
}

TEST(SfqCoupling, Values)
{
    EXPECT_DOUBLE_EQ(sfq_coupling(2), 0.5);
    EXPECT_NEAR(sfq_coupling(1), 0.7071, 1e-4);
    EXPECT_NEAR(sfq_coupling(50), 0.1, 1e-15);
    EXPECT_THROW(sfq_coupling(0), ArgumentError);
}

TEST(SfqCoupling, GivesSingleFluxInductance)
{
    for (std::uint64_t n = 1; n <= 10000; ++n)
    {
        const double l = no_collection_shared_ic(n, sfq_coupling(n), 300e-6);
        ASSERT_NEAR(l, kPhi0 / 300e-6, 1e-12 * kPhi0 / 300e-6) << n;
    }
}

TEST(VaryIc, SfqCriticalCurrents)
{
    EXPECT_EQ(vary_ic_no_collection(4, 0.5, 300e-6, true).ic_di, 300e-6);
    EXPECT_NEAR(vary_ic_no_collection(100, 0.5, 300e-6, true).ic_di, 300e-6 / 25.0, 1e-20);
    const auto r = vary_ic_no_collection(100, 0.5, 300e-6, true);
    EXPECT_NEAR(r.l_di2 * r.ic_di, kPhi0, 1e-12 * kPhi0);
}

TEST(VaryIc, InverseInFanInForFixedCurrents)
{
    const auto a = vary_ic_no_collection(8, 0.6, 300e-6, false, 100e-6);
    const auto b = vary_ic_no_collection(16, 0.6, 300e-6, false, 100e-6);
    EXPECT_NEAR(b.l_di2, a.l_di2 / 2.0, 1e-12 * a.l_di2);
    // Shared currents reduce to the shared-Ic closed form.
    EXPECT_NEAR(vary_ic_no_collection(8, 0.6, 300e-6, false).l_di2, no_collection_shared_ic(8, 0.6, 300e-6),
                1e-12 * no_collection_shared_ic(8, 0.6, 300e-6));
}

TEST(VaryIc, SfqFactorTwoReport)
{
    const auto r = sfq_ic_consistency(4, 0.5, 300e-6);
    EXPECT_FALSE(r.consistent);
    EXPECT_NEAR(r.ratio, 2.0, 1e-12);
    EXPECT_NEAR(r.phi_max_consistent, 0.5, 1e-12);
    EXPECT_NEAR(r.phi_max_as_stated, 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NE(r.summary.find("ic_dr/(2 n k^2)"), std::string::npos);
}

TEST(Feasibility, SubTenthPicohenryFlagged)
{
    EXPECT_TRUE(assess_inductance("l_di2", 0.05e-12).difficult);
    EXPECT_FALSE(assess_inductance("l_di2", 0.2e-12).difficult);
    // Large fan-in without a collection loop ends up below the floor.
    EXPECT_TRUE(assess_inductance("l_di2", no_collection_shared_ic(10000, 0.5, 300e-6)).difficult);
}
