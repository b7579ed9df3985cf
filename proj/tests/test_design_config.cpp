#include "squidfan/design_config.hpp"

#include <gtest/gtest.h>

using namespace squidfan;
using nlohmann::json;

TEST(DesignConfig, EmptyObjectKeepsDefaults)
{
    const auto cfg = parse_design_config(json::object());
    EXPECT_EQ(cfg.collection.n, 10u);
    EXPECT_DOUBLE_EQ(cfg.collection.ic, 300e-6);
    EXPECT_DOUBLE_EQ(cfg.phi_max, 0.5);
}

TEST(DesignConfig, SuffixedKeysAreScaled)
{
    const auto cfg = parse_design_config(json{{"ic_uA", 250}, {"l_dc1_pH", 12}, {"l_di1_nH", 2}, {"l_dc3_fH", 5e4},
                                              {"k", 0.6}, {"n", 16}, {"alpha", 0.1}});
    EXPECT_DOUBLE_EQ(cfg.collection.ic, 250e-6);
    EXPECT_DOUBLE_EQ(cfg.collection.l_dc1, 12e-12);
    EXPECT_DOUBLE_EQ(cfg.collection.l_di1, 2e-9);
    EXPECT_DOUBLE_EQ(cfg.collection.l_dc3, 50e-12);
    EXPECT_DOUBLE_EQ(cfg.collection.k1, 0.6);
    EXPECT_DOUBLE_EQ(cfg.collection.k2, 0.6);
    EXPECT_DOUBLE_EQ(cfg.no_collection.k, 0.6);
    EXPECT_EQ(cfg.no_collection.n, 16u);
    EXPECT_DOUBLE_EQ(cfg.no_collection.ic_dr, 250e-6);
    EXPECT_DOUBLE_EQ(cfg.no_collection.ic_di, 250e-6);
}

TEST(DesignConfig, SeparateCriticalCurrents)
{
    const auto cfg = parse_design_config(json{{"ic_dr_uA", 300}, {"ic_di_mA", 0.1}, {"sfq_mode", true}});
    EXPECT_DOUBLE_EQ(cfg.no_collection.ic_dr, 300e-6);
    EXPECT_DOUBLE_EQ(cfg.no_collection.ic_di, 100e-6);
    EXPECT_TRUE(cfg.no_collection.sfq_mode);
}

TEST(DesignConfig, BareSiKeysNeedUnitTag)
{
    EXPECT_THROW(parse_design_config(json{{"ic", 3e-4}}), ConfigError);
    const auto cfg = parse_design_config(json{{"units", "SI"}, {"ic", 3e-4}, {"l_dc1", 1e-11}});
    EXPECT_DOUBLE_EQ(cfg.collection.ic, 3e-4);
    EXPECT_THROW(parse_design_config(json{{"units", "cgs"}}), ConfigError);
}

TEST(DesignConfig, RejectsBadInput)
{
    EXPECT_THROW(parse_design_config(json{{"ic_kA", 1}}), ConfigError);
    EXPECT_THROW(parse_design_config(json{{"bogus", 1}}), ConfigError);
    EXPECT_THROW(parse_design_config(json{{"ic_uA", 300}, {"ic_A", 3e-4}}), ConfigError);
    EXPECT_THROW(parse_design_config(json{{"phi_max", 0.4}, {"phi_max_phi0", 0.4}}), ConfigError);
    EXPECT_THROW(parse_design_config(json{{"n", 2.5}}), ConfigError);
    EXPECT_THROW(parse_design_config(json{{"n", 0}}), ConfigError);
    EXPECT_THROW(parse_design_config(json{{"k", "0.5"}}), ConfigError);
    EXPECT_THROW(parse_design_config(json{{"k", 1.5}}), ArgumentError);
    EXPECT_THROW(parse_design_config(json::array()), ConfigError);
    EXPECT_THROW(load_design_config("/nonexistent/config.json"), ConfigError);
}
