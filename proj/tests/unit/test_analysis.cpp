#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <beamforge/analysis.hpp>
#include <beamforge/error.hpp>
#include <beamforge/sampling.hpp>

#include "oracles.hpp"

using namespace beamforge;
using oracle::rel_err;

namespace {

const SectionCatalog& catalog() {
    static const SectionCatalog c = SectionCatalog::generate();
    return c;
}

BeamSystem designed(std::vector<double> spans, std::vector<double> udls, std::vector<int> idx) {
    return {std::move(spans), std::move(udls), std::move(idx)};
}

BeamSystem random_designed(std::size_t m, Rng& rng) {
    BeamSystem s = random_system(m, DesignConstraints{}, rng);
    std::uniform_int_distribution<int> pick(0, 999);
    std::vector<int> idx(m);
    for (auto& i : idx) i = pick(rng);
    s.section_indices = idx;
    return s;
}

}  // namespace

TEST(Analysis, SingleSpanIsDeterminate) {
    const SteelGrade g;
    for (int idx : {0, 500, 999}) {
        const auto f = analyze(designed({8.0}, {20.0}, {idx}), LoadArrangement::all(1), catalog(), g);
        ASSERT_EQ(f.size(), 1u);
        EXPECT_LT(rel_err(f[0].max_span_moment, 160e6), 1e-9);
        EXPECT_LT(rel_err(f[0].shear_start, 80e3), 1e-9);
        EXPECT_LT(rel_err(f[0].shear_end, -80e3), 1e-9);
        EXPECT_LT(std::abs(f[0].moment_start), 1e-9 * 160e6);
        EXPECT_LT(std::abs(f[0].moment_end), 1e-9 * 160e6);
        EXPECT_NEAR(f[0].max_span_position, 4000.0, 1e-6);
    }
}

TEST(Analysis, TwoSpanSlenderMatchesEuler) {
    const SteelGrade g;
    // Huge shear area drives phi to ~0.
    SectionProps slender{1.0e8, 1.0e12, 1.0e6};
    const double L = 6.0, w = 30.0;
    const BeamModel model({L, L}, {w, w}, {slender, slender}, g);
    ASSERT_LT(shear_parameter(slender, units::m_to_mm(L), g), 1e-6);
    const auto f = model.analyze(LoadArrangement::all(2));
    const double expected = -w * std::pow(units::m_to_mm(L), 2) / 8.0;
    EXPECT_LT(rel_err(f[0].moment_end, expected), 1e-4);
    EXPECT_LT(rel_err(f[1].moment_start, expected), 1e-4);
}

TEST(Analysis, StockyTwoSpanMatchesFlexibilityOracle) {
    const SteelGrade g;
    const auto& p = catalog()[999].props;
    const BeamModel model({1.0, 1.0}, {100.0, 100.0}, {p, p}, g);
    const double phi = shear_parameter(p, 1000.0, g);
    EXPECT_LT(rel_err(phi, 52.476461158141092), 1e-12);
    const auto f = model.analyze(LoadArrangement::all(2));
    const auto o = oracle::flexibility_end_forces({1000.0, 1000.0}, {100.0, 100.0}, {p, p}, g);
    EXPECT_LT(rel_err(f[0].moment_end, o[0].moment_end), 1e-6);
    EXPECT_LT(rel_err(f[0].moment_end, -885324.59319633723), 1e-9);
    // Closed form for equal spans.
    EXPECT_LT(rel_err(-f[0].moment_end, (100.0 * 1e6 / 8.0) / (1.0 + phi / 4.0)), 1e-9);
    EXPECT_LT(rel_err(f[0].shear_start, o[0].shear_start), 1e-9);
}

TEST(Analysis, RandomSystemsMatchFlexibilityOracle) {
    const SteelGrade g;
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 1 + trial % 7;
        const auto s = random_designed(m, rng);
        const BeamModel model(s, catalog(), g);
        std::vector<double> L(m), w(m);
        std::vector<SectionProps> p(m);
        for (std::size_t i = 0; i < m; ++i) {
            L[i] = model.length_mm(i);
            w[i] = model.udl_n_per_mm(i);
            p[i] = model.section(i);
        }
        const auto o = oracle::flexibility_end_forces(L, w, p, g);
        const auto f = model.analyze(LoadArrangement::all(m));
        for (std::size_t i = 0; i < m; ++i) {
            const double scale = w[i] * L[i] * L[i];
            EXPECT_LT(rel_err(f[i].moment_start, o[i].moment_start, scale), 1e-8);
            EXPECT_LT(rel_err(f[i].moment_end, o[i].moment_end, scale), 1e-8);
            EXPECT_LT(rel_err(f[i].shear_start, o[i].shear_start, w[i] * L[i]), 1e-8);
            EXPECT_LT(rel_err(f[i].shear_end, o[i].shear_end, w[i] * L[i]), 1e-8);
        }
    }
}

TEST(Analysis, EulerLimitOfLocalMatrix) {
    const SteelGrade g;
    SectionProps p{2.0e7, 1.0e15, 1.0};
    const double L = 4000.0;
    const auto k = local_stiffness(p, L, g);
    const auto e = local_stiffness_euler(g.youngs_modulus * p.second_moment, L);
    EXPECT_LT((k - e).norm() / e.norm(), 1e-9);
    const double c = g.youngs_modulus * p.second_moment / (L * L * L);
    EXPECT_DOUBLE_EQ(e(0, 0) / c, 12.0);
    EXPECT_DOUBLE_EQ(e(0, 1) / c, 6.0 * L);
    EXPECT_DOUBLE_EQ(e(1, 1) / c, 4.0 * L * L);
    EXPECT_DOUBLE_EQ(e(1, 3) / c, 2.0 * L * L);
}

TEST(Analysis, LocalMatrixSymmetricWithRigidNullspace) {
    const SteelGrade g;
    Rng rng(5);
    std::uniform_int_distribution<int> pick(0, 999);
    std::uniform_real_distribution<double> len(500.0, 20000.0);
    for (int t = 0; t < 50; ++t) {
        const double L = len(rng);
        const auto k = local_stiffness(catalog()[pick(rng)].props, L, g);
        EXPECT_LT((k - k.transpose()).norm(), 1e-12 * k.norm());
        Eigen::Vector4d translate(1, 0, 1, 0), rotate(0, 1, L, 1);
        EXPECT_LT((k * translate).norm(), 1e-9 * k.norm());
        EXPECT_LT((k * rotate).norm(), 1e-9 * k.norm() * L);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(k);
        EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-9 * k.norm());
    }
}

TEST(Analysis, ShearParameterFormula) {
    const SteelGrade g;
    const auto& p = catalog()[500].props;
    const double L = 6000.0;
    const double direct = 12.0 * 210000.0 * p.second_moment / (p.shear_area * 81000.0 * L * L);
    EXPECT_LT(rel_err(shear_parameter(p, L, g), direct), 1e-14);
    EXPECT_THROW((void)local_stiffness(p, 0.0, g), InvalidArgument);
}

TEST(Analysis, GlobalMatrixSymmetric) {
    Rng rng(2);
    const auto s = random_designed(6, rng);
    const BeamModel model(s, catalog(), SteelGrade{});
    const auto k = model.global_stiffness();
    ASSERT_EQ(k.rows(), 14);
    EXPECT_LT((k - k.transpose()).norm(), 1e-12 * k.norm());
}

TEST(Analysis, SuperpositionOverRandomSystems) {
    const SteelGrade g;
    Rng rng(99);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t m = 1 + trial % 7;
        const auto s = random_designed(m, rng);
        const BeamModel model(s, catalog(), g);
        LoadArrangement arr{std::vector<bool>(m)};
        for (std::size_t i = 0; i < m; ++i) arr.loaded[i] = coin(rng);
        arr.loaded[trial % m] = true;
        const auto direct = model.analyze(arr);
        std::vector<EndForces> sum(m);
        for (std::size_t src = 0; src < m; ++src) {
            if (!arr.loaded[src]) continue;
            const auto unit = model.unit_member_forces(src);
            for (std::size_t i = 0; i < m; ++i) sum[i] += unit[i].end_forces();
        }
        for (std::size_t i = 0; i < m; ++i) {
            const double fs = model.udl_n_per_mm(i) * model.length_mm(i) + 1.0;
            const double ms = fs * model.length_mm(i);
            EXPECT_LT(rel_err(sum[i].moment_start, direct[i].moment_start, ms), 1e-9);
            EXPECT_LT(rel_err(sum[i].moment_end, direct[i].moment_end, ms), 1e-9);
            EXPECT_LT(rel_err(sum[i].shear_start, direct[i].shear_start, fs), 1e-9);
            EXPECT_LT(rel_err(sum[i].shear_end, direct[i].shear_end, fs), 1e-9);
        }
    }
}

TEST(Analysis, UnitForcesMatchSingleMemberMasks) {
    Rng rng(3);
    const auto s = random_designed(3, rng);
    const BeamModel model(s, catalog(), SteelGrade{});
    for (std::size_t src = 0; src < 3; ++src) {
        const auto unit = model.unit_member_forces(src);
        const auto direct = model.analyze(LoadArrangement::single(3, src));
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_DOUBLE_EQ(unit[i].moment_start, direct[i].moment_start);
            EXPECT_DOUBLE_EQ(unit[i].shear_end, direct[i].shear_end);
            EXPECT_DOUBLE_EQ(unit[i].max_span_moment, direct[i].max_span_moment);
        }
    }
}

TEST(Analysis, ZeroLoadSourceGivesZeroForces) {
    const auto& p = catalog()[300].props;
    const BeamModel model({4.0, 5.0, 6.0}, {10.0, 0.0, 20.0}, {p, p, p}, SteelGrade{});
    for (const auto& f : model.unit_member_forces(1)) {
        EXPECT_EQ(f.moment_start, 0.0);
        EXPECT_EQ(f.shear_start, 0.0);
        EXPECT_EQ(f.max_span_moment, 0.0);
    }
}

TEST(Analysis, GlobalEquilibriumAndMemberEquilibrium) {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 1 + trial % 9;
        const auto s = random_designed(m, rng);
        const auto f = analyze(s, LoadArrangement::all(m), catalog(), SteelGrade{});
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double wl = s.udls[i] * units::m_to_mm(s.spans[i]);
            total += wl;
            EXPECT_LT(rel_err(f[i].shear_end, f[i].shear_start - wl, wl), 1e-12);
        }
        const auto r = BeamModel::support_reactions(f);
        ASSERT_EQ(r.size(), m + 1);
        double sum = 0.0;
        for (double v : r) sum += v;
        EXPECT_LT(rel_err(sum, total), 1e-9);
    }
}

TEST(Analysis, DeterminateForcesIgnoreSection) {
    const SteelGrade g;
    const auto a = analyze(designed({12.0}, {75.0}, {10}), LoadArrangement::all(1), catalog(), g);
    const auto b = analyze(designed({12.0}, {75.0}, {900}), LoadArrangement::all(1), catalog(), g);
    EXPECT_LT(rel_err(a[0].max_span_moment, b[0].max_span_moment), 1e-12);
    EXPECT_LT(rel_err(a[0].shear_start, b[0].shear_start), 1e-12);
}

TEST(Analysis, Errors) {
    const SteelGrade g;
    BeamSystem s{{4.0}, {10.0}, std::nullopt};
    EXPECT_THROW((void)analyze(s, LoadArrangement::all(1), catalog(), g), InvalidArgument);
    s.section_indices = std::vector<int>{0};
    EXPECT_THROW((void)analyze(s, LoadArrangement::all(2), catalog(), g), InvalidArgument);
    EXPECT_THROW((void)unit_member_forces(s, 3, catalog(), g), InvalidArgument);
}

TEST(Analysis, MaxSpanMomentClosedForm) {
    // Propped-cantilever-like end state: M1 = 0, M2 hogging.
    const double w = 10.0, L = 6000.0, m2 = -w * L * L / 8.0;
    const double v1 = (m2 - 0.0) / L + w * L / 2.0;
    const auto f = member_forces_from_ends({v1, 0.0, v1 - w * L, m2}, w, L);
    EXPECT_LT(rel_err(f.max_span_moment, m2), 1e-12);  // |hogging| exceeds 9wL^2/128
    const double v = (m2 / 4.0) / L + w * L / 2.0;
    const auto h = member_forces_from_ends({v, 0.0, v - w * L, m2 / 4.0}, w, L);
    EXPECT_LT(rel_err(h.max_span_moment, v * v / (2.0 * w)), 1e-12);
    EXPECT_NEAR(h.max_span_shear, 0.0, 1e-9);
}
