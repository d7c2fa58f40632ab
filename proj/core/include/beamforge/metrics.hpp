#pragma once

/**
 * @file metrics.hpp
 * @brief Accuracy metric, MAPE and percentile summaries.
 *
 * Per-row accuracy M = (1/3)(I_hat/I + A_hat/A + W_hat/W) on denormalised
 * values; 1 is exact, above 1 over-design, below 1 under-design.
 */

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <vector>

namespace beamforge {

/// Levels of the accuracy percentile vector: min, 0.5%, 2.5%, median, 97.5%, 99.5%, max.
inline constexpr std::array<double, 7> percentile_levels{0.0, 0.005, 0.025, 0.5,
                                                         0.975, 0.995, 1.0};

struct MetricsReport {
    double mape = 0.0;
    std::array<double, 7> accuracy{};
    std::size_t rows = 0;
};

/// Linear interpolation between closest ranks at position q (n - 1).
/// `sorted` must be ascending and non-empty.
[[nodiscard]] double percentile(const std::vector<double>& sorted, double q);

[[nodiscard]] std::array<double, 7> percentile_vector(std::vector<double> values);

/// Column-wise M for (targets x rows) matrices of denormalised values.
/// Throws InvalidArgument on a zero target.
[[nodiscard]] std::vector<double> accuracy_per_row(const Eigen::MatrixXd& predicted,
                                                   const Eigen::MatrixXd& truth);

/// mean |(pred - truth) / (truth + eps)| over all elements.
[[nodiscard]] double mape(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& truth,
                          double eps);

/// Column-wise mean absolute percentage error.
[[nodiscard]] std::vector<double> mape_per_row(const Eigen::MatrixXd& predicted,
                                               const Eigen::MatrixXd& truth, double eps);

[[nodiscard]] MetricsReport metrics_report(const Eigen::MatrixXd& predicted_normalized,
                                           const Eigen::MatrixXd& truth_normalized,
                                           const Eigen::VectorXd& target_scales, double eps);

}  // namespace beamforge
