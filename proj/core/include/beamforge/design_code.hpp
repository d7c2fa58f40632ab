#pragma once

/**
 * @file design_code.hpp
 * @brief ULS cross-section checks and load-arrangement enumeration.
 *
 * Five checks per member, indexed r:
 *   0  |V_1| / (A_z sigma_y / sqrt 3)
 *   1  |M_1| / (W_pl sigma_y)
 *   2  |V_2| / (A_z sigma_y / sqrt 3)
 *   3  |M_2| / (W_pl sigma_y)
 *   4  |M_span| / (W_pl sigma_y)
 *
 * With `mv_interaction` enabled, the moment resistance at a location whose
 * shear exceeds half the plastic shear resistance is reduced by
 * (1 - rho), rho = (2 V / V_pl - 1)^2. The reduction is applied to the whole
 * plastic modulus, which is conservative relative to reducing the web alone.
 */

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "beamforge/analysis.hpp"

namespace beamforge {

inline constexpr std::size_t check_count = 5;

enum class Check : std::size_t { shear_start, moment_start, shear_end, moment_end, span_moment };

using CheckRatios = std::array<double, check_count>;

struct CheckOptions {
    bool mv_interaction = false;
};

[[nodiscard]] double shear_resistance(const SectionProps& props, const SteelGrade& grade);
[[nodiscard]] double moment_resistance(const SectionProps& props, const SteelGrade& grade);

[[nodiscard]] CheckRatios utilisation(const MemberForces& forces, const SectionProps& props,
                                      const SteelGrade& grade, const CheckOptions& options = {});

[[nodiscard]] inline double governing(const CheckRatios& r) {
    double g = r[0];
    for (double v : r) g = v > g ? v : g;
    return g;
}

enum class ArrangementMode { exhaustive, patterned };

[[nodiscard]] std::string_view to_string(ArrangementMode mode);
[[nodiscard]] ArrangementMode arrangement_mode_from_string(std::string_view name);

struct ArrangementSet {
    std::vector<LoadArrangement> arrangements;
    ArrangementMode mode = ArrangementMode::patterned;

    [[nodiscard]] std::size_t size() const noexcept { return arrangements.size(); }
};

inline constexpr std::size_t max_exhaustive_members = 20;

/// Exhaustive: every non-empty mask, in increasing binary order with member 0
/// as the least significant bit. Patterned: all loaded, the two alternating
/// masks, each adjacent pair around an interior support and each single
/// span, in that order with duplicates and the empty mask removed.
[[nodiscard]] ArrangementSet enumerate_arrangements(std::size_t m, ArrangementMode mode);

struct UtilisationReport {
    /// per_check[i][r]: max over arrangements of check r on member i.
    std::vector<CheckRatios> per_check;
    /// per_arrangement[i][j]: governing check of member i under arrangement j.
    std::vector<std::vector<double>> per_arrangement;
    std::vector<double> governing;
    std::vector<std::size_t> governing_arrangement;
    std::vector<std::size_t> governing_check;

    [[nodiscard]] std::size_t member_count() const noexcept { return governing.size(); }
    [[nodiscard]] double max_governing() const;
};

/// Reduces per-arrangement member forces (forces[j][i]) to a report. The
/// reduction visits arrangements in index order; ties keep the first.
[[nodiscard]] UtilisationReport reduce_utilisation(
    const std::vector<std::vector<MemberForces>>& forces, const std::vector<SectionProps>& props,
    const SteelGrade& grade, const CheckOptions& options = {});

/// Per-arrangement member forces for every arrangement in `set`.
[[nodiscard]] std::vector<std::vector<MemberForces>> arrangement_forces(
    const BeamModel& model, const ArrangementSet& set);

[[nodiscard]] UtilisationReport governing_utilisation(const BeamModel& model,
                                                      const ArrangementSet& set,
                                                      const SteelGrade& grade,
                                                      const CheckOptions& options = {});

[[nodiscard]] UtilisationReport governing_utilisation(const BeamSystem& system,
                                                      const SectionCatalog& catalog,
                                                      const SteelGrade& grade,
                                                      const ArrangementSet& set,
                                                      const CheckOptions& options = {});

}  // namespace beamforge
