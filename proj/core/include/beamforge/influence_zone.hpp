#pragma once

/**
 * @file influence_zone.hpp
 * @brief Influence-zone size of members in designed continuous beams.
 *
 * For a design member g and window half-width k, the captured utilisation
 * u_cap(k) sums, per arrangement, the member-g end forces caused by the
 * loaded members within index distance k of g (force superposition), then
 * evaluates the checks on those summed forces and maximises over
 * arrangements and checks. u_true is u_cap(m - 1). The influence zone of g
 * is the smallest k with |1 - u_cap(k) / u_true| <= epsilon_max.
 */

#include <cstddef>
#include <cstdint>
#include <vector>

#include "beamforge/design_code.hpp"
#include "beamforge/designer.hpp"

namespace beamforge {

/// Captured utilisation with a precomputed unit table (table[source][member]).
[[nodiscard]] double captured_utilisation(const BeamModel& model,
                                          const std::vector<std::vector<EndForces>>& unit_table,
                                          std::size_t g, std::size_t k, const ArrangementSet& set,
                                          const SteelGrade& grade,
                                          const CheckOptions& checks = {});

[[nodiscard]] int member_influence_zone(const BeamModel& model,
                                        const std::vector<std::vector<EndForces>>& unit_table,
                                        std::size_t g, const ArrangementSet& set,
                                        const SteelGrade& grade, double epsilon_max,
                                        const CheckOptions& checks = {});

/// Zones of every member of a designed system.
[[nodiscard]] std::vector<int> system_influence_zones(const BeamSystem& designed,
                                                      const SectionCatalog& catalog,
                                                      const SteelGrade& grade,
                                                      const ArrangementSet& set,
                                                      double epsilon_max,
                                                      const CheckOptions& checks = {});

[[nodiscard]] int member_influence_zone(const BeamSystem& designed, std::size_t g,
                                        const SectionCatalog& catalog, const SteelGrade& grade,
                                        const ArrangementSet& set, double epsilon_max,
                                        const CheckOptions& checks = {});

struct InfluenceZoneEntry {
    std::uint64_t system_id = 0;
    std::size_t member = 0;
    int k = 0;
};

struct InfluenceZoneResult {
    std::vector<InfluenceZoneEntry> entries;  ///< in (system_id, member) order
    std::vector<int> per_member_k;
    int k_max = 0;
    double k_mean = 0.0;
    std::vector<std::size_t> histogram;  ///< histogram[k] = member count
    double epsilon_max = 0.0;
    std::size_t m = 0;
    std::size_t systems_requested = 0;
    std::size_t systems_used = 0;
    std::size_t design_failures = 0;  ///< thrown or non-compliant designs
};

struct InfluenceZoneOptions {
    ArrangementMode mode = ArrangementMode::patterned;
    DesignOptions design;
    std::size_t threads = 1;
};

/// Designs `samples` seeded random systems of m_probe members and collects
/// every member's influence zone. Failed designs are counted, not fatal.
[[nodiscard]] InfluenceZoneResult estimate_k_max(const DesignConstraints& constraints,
                                                 const SectionCatalog& catalog,
                                                 const SteelGrade& grade, std::size_t samples,
                                                 std::size_t m_probe, double epsilon_max,
                                                 std::uint64_t seed,
                                                 const InfluenceZoneOptions& options = {});

}  // namespace beamforge
