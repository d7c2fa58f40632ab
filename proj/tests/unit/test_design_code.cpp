#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include <beamforge/design_code.hpp>
#include <beamforge/error.hpp>
#include <beamforge/sampling.hpp>

using namespace beamforge;

namespace {

const SectionCatalog& catalog() {
    static const SectionCatalog c = SectionCatalog::generate();
    return c;
}

std::string mask(const LoadArrangement& a) {
    std::string s;
    for (bool b : a.loaded) s += b ? '1' : '0';
    return s;
}

BeamSystem random_designed(std::size_t m, Rng& rng) {
    BeamSystem s = random_system(m, DesignConstraints{}, rng);
    std::uniform_int_distribution<int> pick(200, 999);
    std::vector<int> idx(m);
    for (auto& i : idx) i = pick(rng);
    s.section_indices = idx;
    return s;
}

}  // namespace

TEST(DesignCode, ShearAtResistanceIsUnity) {
    const SectionProps p = catalog()[100].props;
    const SteelGrade g;
    MemberForces f;
    f.shear_start = p.shear_area * g.yield_stress / std::sqrt(3.0);
    const auto r = utilisation(f, p, g);
    EXPECT_DOUBLE_EQ(r[0], 1.0);
    EXPECT_EQ(r[1], 0.0);
}

TEST(DesignCode, ZeroForcesZeroRatios) {
    const auto r = utilisation(MemberForces{}, catalog()[0].props, SteelGrade{});
    for (double v : r) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(governing(r), 0.0);
}

TEST(DesignCode, HandMomentRatio) {
    const SteelGrade g;
    // W_pl sigma_y is twice wL^2/8 = 160 kN m.
    const SectionProps p{1.0e9, 1.0e5, 2.0 * 160e6 / g.yield_stress};
    const BeamModel model({8.0}, {20.0}, {p}, g);
    const auto f = model.analyze(LoadArrangement::all(1));
    const auto r = utilisation(f[0], p, g);
    EXPECT_NEAR(r[static_cast<std::size_t>(Check::span_moment)], 0.5, 1e-12);
}

TEST(DesignCode, ArrangementCounts) {
    EXPECT_EQ(enumerate_arrangements(1, ArrangementMode::exhaustive).size(), 1u);
    EXPECT_EQ(enumerate_arrangements(1, ArrangementMode::patterned).size(), 1u);
    EXPECT_EQ(enumerate_arrangements(3, ArrangementMode::exhaustive).size(), 7u);
    EXPECT_EQ(enumerate_arrangements(10, ArrangementMode::exhaustive).size(), 1023u);
    EXPECT_THROW((void)enumerate_arrangements(21, ArrangementMode::exhaustive), InvalidArgument);
    EXPECT_NO_THROW((void)enumerate_arrangements(40, ArrangementMode::patterned));
    EXPECT_THROW((void)enumerate_arrangements(0, ArrangementMode::patterned), InvalidArgument);
}

TEST(DesignCode, PatternedThreeMembers) {
    const auto set = enumerate_arrangements(3, ArrangementMode::patterned);
    std::vector<std::string> got;
    for (const auto& a : set.arrangements) got.push_back(mask(a));
    const std::vector<std::string> want{"111", "101", "010", "110", "011", "100", "001"};
    EXPECT_EQ(got, want);
}

TEST(DesignCode, PatternedHasAllLoadedAndNoDuplicates) {
    for (std::size_t m = 1; m <= 17; ++m) {
        const auto set = enumerate_arrangements(m, ArrangementMode::patterned);
        EXPECT_EQ(set.arrangements.front(), LoadArrangement::all(m));
        std::set<std::string> seen;
        for (const auto& a : set.arrangements) {
            EXPECT_FALSE(a.empty_load());
            EXPECT_TRUE(seen.insert(mask(a)).second) << mask(a);
        }
    }
}

TEST(DesignCode, ExhaustiveOrderIsBinary) {
    const auto set = enumerate_arrangements(3, ArrangementMode::exhaustive);
    EXPECT_EQ(mask(set.arrangements[0]), "100");
    EXPECT_EQ(mask(set.arrangements[1]), "010");
    EXPECT_EQ(mask(set.arrangements[2]), "110");
    EXPECT_EQ(mask(set.arrangements[6]), "111");
}

TEST(DesignCode, ModeNames) {
    EXPECT_EQ(to_string(ArrangementMode::exhaustive), "exhaustive");
    EXPECT_EQ(arrangement_mode_from_string("patterned"), ArrangementMode::patterned);
    EXPECT_THROW((void)arrangement_mode_from_string("all"), InvalidArgument);
}

TEST(DesignCode, SingleMemberGoverningIsSingleArrangement) {
    const BeamSystem s{{8.0}, {20.0}, std::vector<int>{400}};
    const auto rep = governing_utilisation(s, catalog(), SteelGrade{},
                                           enumerate_arrangements(1, ArrangementMode::exhaustive));
    const auto f = analyze(s, LoadArrangement::all(1), catalog(), SteelGrade{});
    EXPECT_DOUBLE_EQ(rep.governing[0], governing(utilisation(f[0], catalog()[400].props, SteelGrade{})));
    EXPECT_EQ(rep.governing_arrangement[0], 0u);
}

TEST(DesignCode, ExhaustiveDominatesPatterned) {
    Rng rng(21);
    const SteelGrade g;
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 2 + trial % 9;
        const auto s = random_designed(m, rng);
        const auto pat = governing_utilisation(s, catalog(), g, enumerate_arrangements(m, ArrangementMode::patterned));
        const auto exh = governing_utilisation(s, catalog(), g, enumerate_arrangements(m, ArrangementMode::exhaustive));
        for (std::size_t i = 0; i < m; ++i) {
            EXPECT_GE(exh.governing[i], pat.governing[i] * (1.0 - 1e-12));
            for (std::size_t r = 0; r < check_count; ++r) {
                EXPECT_GE(exh.per_check[i][r], pat.per_check[i][r] * (1.0 - 1e-12) - 1e-300);
            }
        }
    }
}

TEST(DesignCode, GoverningIsRowMax) {
    Rng rng(4);
    const auto s = random_designed(6, rng);
    const auto rep = governing_utilisation(s, catalog(), SteelGrade{},
                                           enumerate_arrangements(6, ArrangementMode::patterned));
    for (std::size_t i = 0; i < 6; ++i) {
        double row = 0.0;
        for (double v : rep.per_arrangement[i]) {
            EXPECT_GE(v, 0.0);
            row = std::max(row, v);
        }
        EXPECT_EQ(rep.governing[i], row);
        EXPECT_EQ(rep.governing[i], governing(rep.per_check[i]));
        EXPECT_EQ(rep.per_arrangement[i][rep.governing_arrangement[i]], row);
    }
}

TEST(DesignCode, DoublingSectionHalvesRatiosAtOneMember) {
    const SteelGrade g;
    const SectionProps p = catalog()[250].props;
    const SectionProps p2{2 * p.second_moment, 2 * p.shear_area, 2 * p.plastic_modulus};
    const BeamModel a({6.0}, {40.0}, {p}, g), b({6.0}, {40.0}, {p2}, g);
    const auto set = enumerate_arrangements(1, ArrangementMode::patterned);
    const auto ra = governing_utilisation(a, set, g), rb = governing_utilisation(b, set, g);
    for (std::size_t r = 0; r < check_count; ++r) {
        EXPECT_NEAR(rb.per_check[0][r], 0.5 * ra.per_check[0][r], 1e-12);
    }
}

TEST(DesignCode, LoadScalingIsLinear) {
    Rng rng(8);
    const SteelGrade g;
    auto s = random_designed(5, rng);
    const auto set = enumerate_arrangements(5, ArrangementMode::patterned);
    const auto base = governing_utilisation(s, catalog(), g, set);
    for (auto& w : s.udls) w *= 3.0;
    const auto scaled = governing_utilisation(s, catalog(), g, set);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_NEAR(scaled.governing[i], 3.0 * base.governing[i], 1e-12 * scaled.governing[i]);
    }
}

TEST(DesignCode, AddingArrangementsNeverDecreases) {
    Rng rng(12);
    const SteelGrade g;
    const auto s = random_designed(6, rng);
    auto set = enumerate_arrangements(6, ArrangementMode::patterned);
    ArrangementSet small = set;
    small.arrangements.resize(3);
    const auto a = governing_utilisation(s, catalog(), g, small);
    const auto b = governing_utilisation(s, catalog(), g, set);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_GE(b.governing[i], a.governing[i]);
}

TEST(DesignCode, InteractionReducesMomentCapacityOnlyUnderHighShear) {
    const SteelGrade g;
    const SectionProps p = catalog()[50].props;
    const double v_pl = shear_resistance(p, g);
    const double m_pl = moment_resistance(p, g);
    MemberForces f;
    f.moment_start = 0.4 * m_pl;
    f.shear_start = 0.4 * v_pl;
    const auto low = utilisation(f, p, g, {true});
    EXPECT_NEAR(low[1], 0.4, 1e-12);
    f.shear_start = 0.75 * v_pl;
    const auto high = utilisation(f, p, g, {true});
    EXPECT_NEAR(high[1], 0.4 / (1.0 - 0.25), 1e-12);
    EXPECT_NEAR(utilisation(f, p, g)[1], 0.4, 1e-12);
}
