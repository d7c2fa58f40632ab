#include <gtest/gtest.h>

#include <random>

#include <beamforge/error.hpp>
#include <beamforge/metrics.hpp>

using namespace beamforge;

namespace {

Eigen::MatrixXd random_truth(Eigen::Index rows, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Eigen::MatrixXd t(3, rows);
    for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = u(rng);
    return t;
}

}  // namespace

TEST(Metrics, IdentityGivesOnes) {
    const auto t = random_truth(40, 1);
    for (double v : accuracy_per_row(t, t)) EXPECT_EQ(v, 1.0);
    const auto r = metrics_report(t, t, Eigen::Vector3d(10, 2, 7), 1e-7);
    for (double p : r.accuracy) EXPECT_DOUBLE_EQ(p, 1.0);
    EXPECT_EQ(r.mape, 0.0);
    EXPECT_EQ(r.rows, 40u);
}

TEST(Metrics, UniformDoublingGivesTwo) {
    const auto t = random_truth(25, 2);
    for (double v : accuracy_per_row(2.0 * t, t)) EXPECT_DOUBLE_EQ(v, 2.0);
    const auto r = metrics_report(2.0 * t, t, Eigen::Vector3d(1, 1, 1), 1e-7);
    for (double p : r.accuracy) EXPECT_DOUBLE_EQ(p, 2.0);
}

TEST(Metrics, FiveRowFixture) {
    const std::vector<double> m{0.9, 1.2, 1.0, 0.8, 1.5};
    Eigen::MatrixXd t = random_truth(5, 3), p = t;
    for (Eigen::Index c = 0; c < 5; ++c) p.col(c) *= m[static_cast<std::size_t>(c)];
    const auto rows = accuracy_per_row(p, t);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(rows[i], m[i], 1e-15);
    const auto v = percentile_vector(rows);
    const std::array<double, 7> want{0.8, 0.802, 0.81, 1.0, 1.47, 1.494, 1.5};
    for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(v[i], want[i], 1e-12) << i;
}

TEST(Metrics, PercentileVectorMonotone) {
    std::mt19937 rng(4);
    std::lognormal_distribution<double> d(0.0, 0.5);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> v(1 + t * 13);
        for (auto& x : v) x = d(rng);
        const auto p = percentile_vector(v);
        for (std::size_t i = 1; i < p.size(); ++i) EXPECT_LE(p[i - 1], p[i]);
        EXPECT_EQ(p.front(), *std::min_element(v.begin(), v.end()));
        EXPECT_EQ(p.back(), *std::max_element(v.begin(), v.end()));
    }
}

TEST(Metrics, SymmetricFixtureHasUnitMedian) {
    const auto t = random_truth(101, 5);
    Eigen::MatrixXd p = t;
    for (Eigen::Index c = 0; c < 101; ++c) {
        const double s = (c - 50) * 0.004;
        p.col(c) *= 1.0 + s;
    }
    EXPECT_NEAR(percentile_vector(accuracy_per_row(p, t))[3], 1.0, 1e-12);
}

TEST(Metrics, MapeDefinition) {
    Eigen::MatrixXd t(1, 2), p(1, 2);
    t << 1.0, 2.0;
    p << 1.1, 1.0;
    EXPECT_NEAR(mape(p, t, 0.0), (0.1 + 0.5) / 2.0, 1e-15);
    const auto per = mape_per_row(p, t, 0.0);
    EXPECT_NEAR(per[1], 0.5, 1e-15);
}

TEST(Metrics, NormalisedAndDenormalisedMapeDiffer) {
    // MAPE is computed on normalised values; the epsilon guard makes the two differ.
    Eigen::MatrixXd t(3, 1), p(3, 1);
    t << 1e-6, 0.5, 0.5;
    p << 2e-6, 0.5, 0.5;
    const auto r = metrics_report(p, t, Eigen::Vector3d(1e4, 1, 1), 1e-6);
    EXPECT_NEAR(r.mape, (1e-6 / 2e-6) / 3.0, 1e-12);
    EXPECT_NEAR(r.accuracy[3], (2.0 + 1.0 + 1.0) / 3.0, 1e-12);
}

TEST(Metrics, ZeroTargetRejected) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Ones(3, 2);
    t(1, 1) = 0.0;
    EXPECT_THROW((void)accuracy_per_row(t, t), InvalidArgument);
}

TEST(Metrics, PercentileInterpolation) {
    const std::vector<double> v{1.0, 3.0};
    EXPECT_DOUBLE_EQ(percentile(v, 0.25), 1.5);
    EXPECT_DOUBLE_EQ(percentile({7.0}, 0.9), 7.0);
}
