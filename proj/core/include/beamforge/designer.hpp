#pragma once

/**
 * @file designer.hpp
 * @brief Coupled analysis-design sizing of continuous beams.
 *
 * Each sweep analyses the current design under every arrangement, then gives
 * each member the lowest catalog index whose resistances bring its
 * governing utilisation under those forces to at most u_target. Sweeps
 * repeat until the indices stop changing. A short cycle (period <= 4) is
 * broken by taking the elementwise maximum index over the cycle and
 * continuing from there.
 */

#include <cstddef>

#include "beamforge/design_code.hpp"

namespace beamforge {

struct DesignOptions {
    int max_sweeps = 50;
    std::size_t max_cycle_period = 4;
    /// Start from the system's own indices when it already has them.
    bool warm_start = true;
    CheckOptions checks;
};

struct DesignResult {
    BeamSystem system;  ///< with section_indices filled
    UtilisationReport report;
    int sweeps = 0;
    bool cycle_resolved = false;
    /// Every member's final governing utilisation is below 1.
    bool compliant = false;
};

/// Lowest index meeting the single-span determinate demand (wL^2/8, wL/2).
[[nodiscard]] int initial_section_index(double span_m, double udl_kn_m,
                                        const SectionCatalog& catalog, const SteelGrade& grade,
                                        double u_target);

/// Lowest index whose utilisation under every force state in `forces` is at
/// most u_target, or -1 if no catalog section suffices.
[[nodiscard]] int select_section(const std::vector<MemberForces>& forces,
                                 const SectionCatalog& catalog, const SteelGrade& grade,
                                 double u_target, const CheckOptions& checks = {});

/// Throws NoCompliantSection when a demand exceeds the largest section and
/// ConvergenceError when the sweep cap is reached.
[[nodiscard]] DesignResult design(const BeamSystem& system, const SectionCatalog& catalog,
                                  const SteelGrade& grade, const DesignConstraints& constraints,
                                  const ArrangementSet& set, const DesignOptions& options = {});

}  // namespace beamforge
