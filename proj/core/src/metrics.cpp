#include "beamforge/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "beamforge/error.hpp"

namespace beamforge {

double percentile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw InvalidArgument("neural-net", "percentile of an empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::array<double, 7> percentile_vector(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::array<double, 7> out{};
    for (std::size_t i = 0; i < percentile_levels.size(); ++i) {
        out[i] = percentile(values, percentile_levels[i]);
    }
    return out;
}

std::vector<double> accuracy_per_row(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& truth) {
    if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols()) {
        throw InvalidArgument("neural-net", "prediction and target shapes differ");
    }
    std::vector<double> m(static_cast<std::size_t>(truth.cols()));
    for (Eigen::Index c = 0; c < truth.cols(); ++c) {
        double s = 0.0;
        for (Eigen::Index r = 0; r < truth.rows(); ++r) {
            if (truth(r, c) == 0.0) {
                throw InvalidArgument("neural-net", "zero target in accuracy metric at row " +
                                                        std::to_string(c));
            }
            s += predicted(r, c) / truth(r, c);
        }
        m[static_cast<std::size_t>(c)] = s / static_cast<double>(truth.rows());
    }
    return m;
}

double mape(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& truth, double eps) {
    if (truth.size() == 0) return 0.0;
    return ((predicted - truth).array() / (truth.array() + eps)).abs().mean();
}

std::vector<double> mape_per_row(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& truth,
                                 double eps) {
    const Eigen::ArrayXXd e = ((predicted - truth).array() / (truth.array() + eps)).abs();
    std::vector<double> out(static_cast<std::size_t>(truth.cols()));
    for (Eigen::Index c = 0; c < truth.cols(); ++c) out[static_cast<std::size_t>(c)] = e.col(c).mean();
    return out;
}

MetricsReport metrics_report(const Eigen::MatrixXd& predicted_normalized,
                             const Eigen::MatrixXd& truth_normalized,
                             const Eigen::VectorXd& target_scales, double eps) {
    if (truth_normalized.cols() == 0) {
        throw InvalidArgument("neural-net", "cannot evaluate an empty partition");
    }
    MetricsReport r;
    r.rows = static_cast<std::size_t>(truth_normalized.cols());
    r.mape = mape(predicted_normalized, truth_normalized, eps);
    const Eigen::MatrixXd p = target_scales.asDiagonal() * predicted_normalized;
    const Eigen::MatrixXd t = target_scales.asDiagonal() * truth_normalized;
    r.accuracy = percentile_vector(accuracy_per_row(p, t));
    return r;
}

}  // namespace beamforge
