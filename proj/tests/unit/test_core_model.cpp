#include <gtest/gtest.h>

#include <beamforge/core_model.hpp>
#include <beamforge/error.hpp>

using namespace beamforge;

namespace {

BeamSystem make(std::vector<double> spans, std::vector<double> udls) {
    return {std::move(spans), std::move(udls), std::nullopt};
}

}  // namespace

TEST(CoreModel, OnGridSystemIsValid) {
    const auto r = validate_system(make({10.0}, {100.0}), DesignConstraints{});
    EXPECT_TRUE(r.ok) << r.reason;
}

TEST(CoreModel, SpanBelowRangeIsRejected) {
    const auto r = validate_system(make({0.4}, {100.0}), DesignConstraints{});
    ASSERT_FALSE(r.ok);
    EXPECT_NE(r.reason.find("out of range"), std::string::npos) << r.reason;
}

TEST(CoreModel, OffGridSpanIsRejected) {
    const auto r = validate_system(make({1.0, 1.25}, {5.0, 5.0}), DesignConstraints{});
    ASSERT_FALSE(r.ok);
    EXPECT_NE(r.reason.find("member 1"), std::string::npos) << r.reason;
    EXPECT_NE(r.reason.find("grid"), std::string::npos) << r.reason;
}

TEST(CoreModel, LengthMismatchIsRejected) {
    const auto r = validate_system(make({1.0, 1.5}, {5.0}), DesignConstraints{});
    ASSERT_FALSE(r.ok);
    EXPECT_NE(r.reason.find("length mismatch"), std::string::npos);
    BeamSystem s = make({1.0}, {5.0});
    s.section_indices = std::vector<int>{1, 2};
    EXPECT_FALSE(validate_system(s, DesignConstraints{}).ok);
}

TEST(CoreModel, OffGridUdlAndOutOfRangeUdl) {
    EXPECT_FALSE(validate_system(make({1.0}, {7.5}), DesignConstraints{}).ok);
    EXPECT_FALSE(validate_system(make({1.0}, {330.0}), DesignConstraints{}).ok);
    EXPECT_TRUE(validate_system(make({20.0}, {325.0}), DesignConstraints{}).ok);
}

TEST(CoreModel, RequireValidThrowsWithReason) {
    try {
        require_valid_system(make({0.4}, {100.0}), DesignConstraints{});
        FAIL() << "no throw";
    } catch (const InvalidArgument& e) {
        EXPECT_EQ(std::string(e.what()).rfind("core-model: ", 0), 0u) << e.what();
    }
}

TEST(CoreModel, GridSizesMatchDefaults) {
    const DesignConstraints c;
    EXPECT_EQ(c.span_grid_size(), 40u);
    EXPECT_EQ(c.udl_grid_size(), 65u);
    EXPECT_DOUBLE_EQ(c.span_at(39), 20.0);
    EXPECT_DOUBLE_EQ(c.udl_at(64), 325.0);
    for (std::size_t i = 0; i < c.span_grid_size(); ++i) EXPECT_EQ(c.span_index(c.span_at(i)), i);
    for (std::size_t i = 0; i < c.udl_grid_size(); ++i) EXPECT_EQ(c.udl_index(c.udl_at(i)), i);
}

TEST(CoreModel, UnitRoundTripIsExactOnGrid) {
    const DesignConstraints c;
    for (std::size_t i = 0; i < c.span_grid_size(); ++i) {
        const double L = c.span_at(i);
        EXPECT_EQ(units::mm_to_m(units::m_to_mm(L)), L);
    }
    for (std::size_t i = 0; i < c.udl_grid_size(); ++i) {
        const double w = c.udl_at(i);
        EXPECT_EQ(units::n_per_mm_to_kn_per_m(units::kn_per_m_to_n_per_mm(w)), w);
    }
}

TEST(CoreModel, ConstraintValidation) {
    EXPECT_NO_THROW(DesignConstraints{}.validate());
    DesignConstraints c;
    c.span_interval = 0.7;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.u_target = 1.2;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.epsilon_max = 0.0;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.udl_min = 400.0;
    EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(CoreModel, GradeValidation) {
    EXPECT_NO_THROW(SteelGrade::s355().validate());
    SteelGrade g;
    g.shear_modulus = 300000.0;
    EXPECT_THROW(g.validate(), InvalidArgument);
    g = {};
    g.yield_stress = 0.0;
    EXPECT_THROW(g.validate(), InvalidArgument);
}
