#pragma once

/**
 * @file dataset.hpp
 * @brief Per-member window dataset: generation, filtering, encoding, splits and files.
 *
 * A data point describes one design member g of a designed system through a
 * symmetric window of 2 k_max + 1 members centred on g:
 *
 *   inputs  = [L_{g-k}, ..., L_{g+k}, w_{g-k}, ..., w_{g+k}]   (m, kN/m)
 *   targets = [I, A_z, W_pl] of g's section                      (cm^4, cm^2, cm^3)
 *
 * Window slots outside the system are zero (a beam of zero length and load).
 *
 * On disk a dataset is a directory holding train.csv, validation.csv,
 * test.csv and manifest.json. Normalisation scales are per-column maxima over
 * train + validation and are stored in the manifest.
 */

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "beamforge/designer.hpp"

namespace beamforge {

inline constexpr std::size_t target_count = 3;

struct DataPointMeta {
    std::uint64_t system_id = 0;
    std::size_t member_index = 0;
    double utilisation = 0.0;
    int section_index = -1;
};

struct DataPoint {
    std::vector<double> inputs;                  ///< 4 k_max + 2 values
    std::array<double, target_count> targets{};  ///< I cm^4, A_z cm^2, W_pl cm^3
    DataPointMeta meta;

    bool operator==(const DataPoint& o) const {
        return inputs == o.inputs && targets == o.targets &&
               meta.system_id == o.meta.system_id && meta.member_index == o.meta.member_index &&
               meta.utilisation == o.meta.utilisation &&
               meta.section_index == o.meta.section_index;
    }
};

[[nodiscard]] constexpr std::size_t window_input_size(std::size_t k_max) { return 4 * k_max + 2; }

/// Column names: L_m{k}..L_m1, L_0, L_p1..L_p{k}, then the same for w_.
[[nodiscard]] std::vector<std::string> input_column_names(std::size_t k_max);
[[nodiscard]] const std::array<std::string, target_count>& target_column_names();
/// Full CSV header: inputs, targets, u, system_id, member_idx, section_idx.
[[nodiscard]] std::vector<std::string> csv_columns(std::size_t k_max);

/// Window of spans and UDLs around g. Throws InvalidArgument when g >= m.
[[nodiscard]] std::vector<double> encode_inputs(const BeamSystem& system, std::size_t g,
                                                std::size_t k_max);

/// Window plus member g's section properties; the system must be designed.
[[nodiscard]] DataPoint encode_window(const BeamSystem& designed, std::size_t g,
                                      std::size_t k_max, const SectionCatalog& catalog);

/// Per-column normalisation divisors (strictly positive).
struct Scales {
    std::vector<double> inputs;
    std::array<double, target_count> targets{1.0, 1.0, 1.0};
};

/// Column maxima over the given points; zero maxima become 1.
[[nodiscard]] Scales compute_scales(const std::vector<const std::vector<DataPoint>*>& parts,
                                    std::size_t k_max);

/// Normalised column-major view: x is (inputs x rows), y is (3 x rows).
/// Values are divided by the scales and never clamped.
struct Partition {
    Eigen::MatrixXd x;
    Eigen::MatrixXd y;

    [[nodiscard]] std::size_t rows() const noexcept { return static_cast<std::size_t>(x.cols()); }
};

[[nodiscard]] Partition normalize(const std::vector<DataPoint>& points, const Scales& scales);
[[nodiscard]] Eigen::VectorXd normalize_inputs(const std::vector<double>& inputs,
                                               const Scales& scales);
[[nodiscard]] std::array<double, target_count> denormalize_targets(const Eigen::VectorXd& y,
                                                                   const Scales& scales);

struct FilterBand {
    double lower = 0.97;  ///< inclusive
    double upper = 1.00;  ///< exclusive

    [[nodiscard]] bool contains(double u) const noexcept { return u >= lower && u < upper; }
};

struct DatasetManifest {
    int format_version = 1;
    std::size_t k_max = 0;
    std::uint64_t seed = 0;
    std::size_t requested_count = 0;
    std::array<std::size_t, 3> counts{};  ///< train, validation, test
    DesignConstraints constraints;
    FilterBand band;
    std::string arrangement_mode = "patterned";
    std::size_t systems_drawn = 0;
    std::size_t systems_survived = 0;
    std::size_t design_failures = 0;
    std::string source = "generated";
};

struct DatasetBundle {
    std::vector<DataPoint> train;
    std::vector<DataPoint> validation;
    std::vector<DataPoint> test;
    Scales scales;
    DatasetManifest manifest;

    [[nodiscard]] std::size_t k_max() const noexcept { return manifest.k_max; }
    [[nodiscard]] std::size_t size() const noexcept {
        return train.size() + validation.size() + test.size();
    }
};

/// n * 70 / 100, n * 15 / 100 and the remainder.
[[nodiscard]] std::array<std::size_t, 3> split_sizes(std::size_t n);

/// Shuffles with the seed, truncates to `count` (0 keeps all), splits and
/// computes scales. The manifest's counts and k_max are filled in.
[[nodiscard]] DatasetBundle assemble_bundle(std::vector<DataPoint> points, std::size_t k_max,
                                            std::size_t count, std::uint64_t seed,
                                            DatasetManifest manifest = {});

struct DatasetOptions {
    ArrangementMode mode = ArrangementMode::patterned;
    DesignOptions design;
    FilterBand band;
    std::size_t threads = 1;
    /// Systems designed per parallel block.
    std::size_t block_size = 256;
    /// Abort after this many systems without reaching the target.
    std::size_t max_systems = 1'000'000;
    /// Called on every successful design before filtering (from worker threads).
    std::function<void(std::uint64_t system_id, DesignResult& result)> post_design_hook;
};

/// Survivors of one generated system, in member order (empty when rejected).
struct SystemOutcome {
    bool designed = false;
    bool survived = false;
    std::vector<DataPoint> points;
};

/// Draws, designs, filters and encodes system `system_id` of a seeded run.
[[nodiscard]] SystemOutcome generate_system(std::uint64_t system_id, std::size_t m,
                                            const DesignConstraints& constraints,
                                            const SectionCatalog& catalog,
                                            const SteelGrade& grade, const ArrangementSet& set,
                                            std::size_t k_max, std::uint64_t seed,
                                            const DatasetOptions& options);

/// Systems of m = 2 k_max + 1 members are drawn until at least `count`
/// surviving points exist; a system survives only if it is compliant and
/// every member's governing utilisation lies in the band.
[[nodiscard]] DatasetBundle generate(const DesignConstraints& constraints,
                                     const SectionCatalog& catalog, const SteelGrade& grade,
                                     std::size_t k_max, std::size_t count, std::uint64_t seed,
                                     const DatasetOptions& options = {});

/// Writes the four files into `dir` (created if missing; existing files are
/// overwritten, callers guard against that).
void save(const DatasetBundle& bundle, const std::filesystem::path& dir);

/// Reads a directory written by save(), checking schema and invariants.
/// Throws SchemaError naming the file and row on any mismatch.
[[nodiscard]] DatasetBundle load(const std::filesystem::path& dir);

/// Writes / reads a single partition CSV.
void write_partition_csv(std::ostream& os, const std::vector<DataPoint>& points,
                         std::size_t k_max);
[[nodiscard]] std::vector<DataPoint> read_partition_csv(std::istream& is, std::size_t k_max,
                                                        const std::string& label);

/// Maps this library's column names to the columns of a foreign CSV. Keys
/// missing from the map are assumed to have the same name; meta columns
/// (u, system_id, member_idx, section_idx) are optional in the foreign file.
using ColumnMapping = std::map<std::string, std::string>;

/// Reads any CSV carrying window and target columns under a column mapping.
[[nodiscard]] std::vector<DataPoint> ingest_csv(const std::filesystem::path& path,
                                                std::size_t k_max,
                                                const ColumnMapping& mapping = {});

}  // namespace beamforge
