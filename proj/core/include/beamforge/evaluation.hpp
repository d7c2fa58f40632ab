#pragma once

/**
 * @file evaluation.hpp
 * @brief Study harness: hyperparameter grids, generalisation over system size,
 *        decile dispersion, load heatmaps and initialiser robustness.
 *
 * Every function returns plain tables in a fixed row order; the write_*
 * helpers emit them as CSV.
 */

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beamforge/dataset.hpp"
#include "beamforge/influence_zone.hpp"
#include "beamforge/nn.hpp"

namespace beamforge {

// ---------------------------------------------------------------------------
// grid study

enum class GridAxis { loss_activation, heights, depths, dataset_sizes };

[[nodiscard]] std::string_view to_string(GridAxis axis);
[[nodiscard]] GridAxis grid_axis_from_string(std::string_view name);

struct GridSpec {
    GridAxis axis = GridAxis::loss_activation;
    std::vector<Loss> losses{Loss::mae, Loss::mse, Loss::mape, Loss::mspe};
    /// (inner, outer) pairs.
    std::vector<std::pair<Activation, Activation>> activations{
        {Activation::relu, Activation::relu},    {Activation::relu, Activation::sigmoid},
        {Activation::relu, Activation::exp},     {Activation::sigmoid, Activation::relu},
        {Activation::sigmoid, Activation::sigmoid}, {Activation::sigmoid, Activation::exp},
        {Activation::tanh, Activation::relu},    {Activation::tanh, Activation::sigmoid},
        {Activation::tanh, Activation::exp}};
    /// Two equal hidden layers of each height.
    std::vector<std::size_t> heights{50, 100, 200, 400, 600};
    /// Hidden-layer counts at depth_height units each.
    std::vector<std::size_t> depths{1, 2, 3, 4, 5};
    std::size_t depth_height = 600;
    /// Training rows kept (the first n of the training partition).
    std::vector<std::size_t> dataset_sizes{1000, 5000, 10000, 20000};
};

struct GridCell {
    std::string key;
    NetworkConfig config;
    std::size_t train_rows = 0;
    bool ok = false;
    std::string error;
    MetricsReport train;
    MetricsReport validation;
};

/// Cells in a fixed order; each trains one model from base.seed. Configs are
/// not validated here, so an invalid cell fails on its own in grid_study.
[[nodiscard]] std::vector<NetworkConfig> grid_configs(const NetworkConfig& base,
                                                      const GridSpec& spec,
                                                      std::vector<std::string>* keys = nullptr,
                                                      std::vector<std::size_t>* rows = nullptr);

[[nodiscard]] std::vector<GridCell> grid_study(const NetworkConfig& base, const GridSpec& spec,
                                               const DatasetBundle& data,
                                               std::size_t threads = 1);

void write_grid_csv(std::ostream& os, const std::vector<GridCell>& cells);

// ---------------------------------------------------------------------------
// generalisation over system size

struct GeneralisationRow {
    std::size_t m = 0;
    std::size_t points = 0;
    std::size_t systems_drawn = 0;
    std::size_t systems_survived = 0;
    /// Fewer than the requested points could be generated.
    bool flagged = false;
    std::optional<MetricsReport> metrics;
};

struct GeneralisationOptions {
    DatasetOptions dataset;
    /// Systems drawn per m before giving up on reaching points_per_m.
    std::size_t max_systems_per_m = 20'000;
};

/// Fresh seeded systems of every m in [m_min, m_max], designed and filtered to
/// the same band, every member predicted through a zero-padded window.
[[nodiscard]] std::vector<GeneralisationRow> generalisability_sweep(
    const Mlp& model, const Scales& scales, const DesignConstraints& constraints,
    const SectionCatalog& catalog, const SteelGrade& grade, std::size_t k_max,
    std::pair<std::size_t, std::size_t> m_range, std::size_t points_per_m, std::uint64_t seed,
    const GeneralisationOptions& options = {});

void write_generalisation_csv(std::ostream& os, const std::vector<GeneralisationRow>& rows);

// ---------------------------------------------------------------------------
// dispersion

inline constexpr std::size_t decile_count = 10;

enum class Descriptor { span, udl, second_moment, shear_area, plastic_modulus, total_load };

[[nodiscard]] std::string_view to_string(Descriptor d);
inline constexpr std::array<Descriptor, 6> all_descriptors{
    Descriptor::span,       Descriptor::udl,          Descriptor::second_moment,
    Descriptor::shear_area, Descriptor::plastic_modulus, Descriptor::total_load};

/// Descriptor value of a raw data point (own span, own UDL, targets, w L).
[[nodiscard]] double descriptor_value(const DataPoint& p, std::size_t k_max, Descriptor d);

struct DecileRow {
    Descriptor descriptor = Descriptor::span;
    std::array<double, decile_count> upper_bound{};  ///< largest descriptor value per decile
    std::array<std::size_t, decile_count> population{};
    std::array<double, decile_count> accuracy_std{};  ///< population std of M per decile
    double sigma_of_sigmas = 0.0;
};

struct HeatmapCell {
    double udl = 0.0;
    double span = 0.0;
    std::size_t count = 0;
    double mean_mape = 0.0;
    double max_mape = 0.0;
};

struct DispersionResult {
    std::vector<DecileRow> deciles;
    std::vector<HeatmapCell> heatmap;  ///< udl-major, udl_grid x span_grid cells
};

/// Rank-based equal-population deciles (sizes differ by at most one; ties
/// broken by row order). Throws InvalidArgument with fewer rows than deciles.
[[nodiscard]] std::vector<std::array<std::size_t, 2>> decile_ranges(std::size_t rows);

[[nodiscard]] DispersionResult dispersion_from_predictions(
    const std::vector<DataPoint>& points, const std::vector<std::array<double, target_count>>& pred,
    std::size_t k_max, const DesignConstraints& constraints, double loss_epsilon,
    const Scales& scales, const std::vector<Descriptor>& descriptors = {all_descriptors.begin(),
                                                                        all_descriptors.end()});

[[nodiscard]] DispersionResult dispersion_analysis(const Mlp& model, const Scales& scales,
                                                   const std::vector<DataPoint>& points,
                                                   std::size_t k_max,
                                                   const DesignConstraints& constraints);

void write_deciles_csv(std::ostream& os, const std::vector<DecileRow>& rows);
/// Absent cells (no rows) have empty mean/max fields.
void write_heatmap_csv(std::ostream& os, const std::vector<HeatmapCell>& cells);

// ---------------------------------------------------------------------------
// robustness

struct RobustnessRow {
    std::string partition;  ///< train, validation or test
    double mape_mean = 0.0;
    double mape_std = 0.0;
    std::array<double, 7> accuracy_mean{};
    std::array<double, 7> accuracy_std{};
};

struct RobustnessResult {
    std::vector<std::uint64_t> seeds;
    std::vector<std::array<MetricsReport, 3>> per_seed;
    std::vector<RobustnessRow> rows;
};

/// Retrains with each initialiser seed; sample standard deviations across seeds.
[[nodiscard]] RobustnessResult robustness_study(const NetworkConfig& config,
                                                const DatasetBundle& data,
                                                const std::vector<std::uint64_t>& seeds,
                                                std::size_t threads = 1);

/// mean and sample std per partition from per-seed reports.
[[nodiscard]] std::vector<RobustnessRow> summarise_robustness(
    const std::vector<std::array<MetricsReport, 3>>& per_seed);

void write_robustness_csv(std::ostream& os, const std::vector<RobustnessRow>& rows);

}  // namespace beamforge
