#pragma once

/**
 * @file core_model.hpp
 * @brief Shared domain types, unit conventions and the design-constraint envelope.
 *
 * Units: all structural computation runs in N and mm. Spans are stored in
 * metres and UDLs in kN/m (the units of the design brief); the helpers in
 * `units` convert between the two. Note that 1 kN/m == 1 N/mm exactly.
 * Section properties are stored in mm-based units and reported in cm-based
 * units in files (cm^4, cm^2, cm^3).
 */

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace beamforge {

namespace units {

inline constexpr double mm_per_m = 1000.0;
inline constexpr double n_per_mm_per_kn_per_m = 1.0;
inline constexpr double mm4_per_cm4 = 1.0e4;
inline constexpr double mm2_per_cm2 = 1.0e2;
inline constexpr double mm3_per_cm3 = 1.0e3;
inline constexpr double nmm_per_knm = 1.0e6;

constexpr double m_to_mm(double metres) { return metres * mm_per_m; }
constexpr double mm_to_m(double millimetres) { return millimetres / mm_per_m; }
constexpr double kn_per_m_to_n_per_mm(double udl) { return udl * n_per_mm_per_kn_per_m; }
constexpr double n_per_mm_to_kn_per_m(double udl) { return udl / n_per_mm_per_kn_per_m; }

}  // namespace units

/// Linear-elastic steel with a yield stress; all values in N/mm^2.
struct SteelGrade {
    double yield_stress = 355.0;
    double youngs_modulus = 210000.0;
    double shear_modulus = 81000.0;

    [[nodiscard]] static SteelGrade s355() { return {}; }

    /// Throws InvalidArgument unless all moduli are positive and G < E.
    void validate() const;
};

/// Ranges, grid intervals and targets that bound the design space.
struct DesignConstraints {
    double udl_min = 5.0;  ///< kN/m
    double udl_interval = 5.0;
    double udl_max = 325.0;
    double span_min = 0.5;  ///< m
    double span_interval = 0.5;
    double span_max = 20.0;
    double u_target = 0.99;
    double epsilon_max = 0.02;

    void validate() const;

    [[nodiscard]] std::size_t span_grid_size() const;
    [[nodiscard]] std::size_t udl_grid_size() const;
    [[nodiscard]] double span_at(std::size_t grid_index) const;
    [[nodiscard]] double udl_at(std::size_t grid_index) const;

    /// Grid index of a value, or nullopt if it is off-grid or out of range.
    [[nodiscard]] std::optional<std::size_t> span_index(double span_m) const;
    [[nodiscard]] std::optional<std::size_t> udl_index(double udl_kn_m) const;
};

/// Cross-section properties in mm-based units.
struct SectionProps {
    double second_moment = 0.0;    ///< I, mm^4
    double shear_area = 0.0;       ///< A_z, mm^2
    double plastic_modulus = 0.0;  ///< W_pl, mm^3
};

/// A continuous beam of m spans on simple supports.
struct BeamSystem {
    std::vector<double> spans;                        ///< m
    std::vector<double> udls;                         ///< kN/m
    std::optional<std::vector<int>> section_indices;  ///< catalog indices once designed

    [[nodiscard]] std::size_t member_count() const noexcept { return spans.size(); }
    [[nodiscard]] bool is_designed() const noexcept { return section_indices.has_value(); }
};

struct ValidationResult {
    bool ok = true;
    std::string reason;

    explicit operator bool() const noexcept { return ok; }
};

/// Accepts iff every span and UDL lies on the constraint grid; reports the
/// first violation otherwise.
[[nodiscard]] ValidationResult validate_system(const BeamSystem& system,
                                               const DesignConstraints& constraints);

/// Throws InvalidArgument with the reason when validate_system rejects.
void require_valid_system(const BeamSystem& system, const DesignConstraints& constraints);

}  // namespace beamforge
