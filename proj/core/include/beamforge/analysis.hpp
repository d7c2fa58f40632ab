#pragma once

/**
 * @file analysis.hpp
 * @brief Timoshenko stiffness analysis of continuous beams.
 *
 * Model: m two-node Timoshenko elements with DOFs (v, theta) per node.
 * Every node is a simple support (vertical translation fixed, rotation
 * free), so the unknowns are the m+1 nodal rotations.
 *
 * Sign convention (used everywhere in the library):
 *  - loads w act downwards and are given as positive magnitudes;
 *  - internal shear V(x) and moment M(x) satisfy dM/dx = V, dV/dx = -w;
 *  - sagging moments are positive, hogging negative.
 * Hence for a member M(x) = M_1 + V_1 x - w x^2 / 2 and V_2 = V_1 - w L.
 */

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "beamforge/core_model.hpp"
#include "beamforge/sections.hpp"

namespace beamforge {

/// Member i carries its UDL iff loaded[i].
struct LoadArrangement {
    std::vector<bool> loaded;

    [[nodiscard]] static LoadArrangement all(std::size_t m) { return {std::vector<bool>(m, true)}; }
    [[nodiscard]] static LoadArrangement single(std::size_t m, std::size_t member);
    [[nodiscard]] std::size_t size() const noexcept { return loaded.size(); }
    [[nodiscard]] bool empty_load() const;

    bool operator==(const LoadArrangement&) const = default;
};

/// End forces of one member in the internal-force convention (N, N*mm).
struct EndForces {
    double shear_start = 0.0;   ///< V_1
    double moment_start = 0.0;  ///< M_1
    double shear_end = 0.0;     ///< V_2
    double moment_end = 0.0;    ///< M_2

    EndForces& operator+=(const EndForces& o) {
        shear_start += o.shear_start;
        moment_start += o.moment_start;
        shear_end += o.shear_end;
        moment_end += o.moment_end;
        return *this;
    }
};

struct MemberForces {
    double shear_start = 0.0;
    double moment_start = 0.0;
    double shear_end = 0.0;
    double moment_end = 0.0;
    /// Value of M(x) with the largest magnitude over [0, L], ends included.
    double max_span_moment = 0.0;
    /// Position (mm from the start node) of max_span_moment.
    double max_span_position = 0.0;
    /// V at max_span_position (zero for an interior extremum).
    double max_span_shear = 0.0;

    [[nodiscard]] EndForces end_forces() const {
        return {shear_start, moment_start, shear_end, moment_end};
    }
};

/// Builds full member forces from end forces; `udl` is the N/mm acting on the
/// member and `length` its span in mm.
[[nodiscard]] MemberForces member_forces_from_ends(const EndForces& ends, double udl,
                                                   double length);

/// phi = 12 E I / (A_z G L^2), L in mm.
[[nodiscard]] double shear_parameter(const SectionProps& section, double length,
                                     const SteelGrade& grade);

/// Local Timoshenko stiffness matrix for DOFs [v1, theta1, v2, theta2], N and mm:
///   EI / (L^3 (1 + phi)) * [[ 12,          6L,  -12,          6L ],
///                           [ 6L, (4+phi)L^2,  -6L, (2-phi)L^2 ],
///                           [-12,         -6L,   12,         -6L ],
///                           [ 6L, (2-phi)L^2,  -6L, (4+phi)L^2 ]]
[[nodiscard]] Eigen::Matrix4d local_stiffness(const SectionProps& section, double length,
                                              const SteelGrade& grade);

/// Euler-Bernoulli counterpart (phi = 0).
[[nodiscard]] Eigen::Matrix4d local_stiffness_euler(double flexural_rigidity, double length);

/// Continuous beam with sections assigned and its rotational stiffness
/// matrix factorised once; answers any number of load cases.
class BeamModel {
public:
    BeamModel(const BeamSystem& system, const SectionCatalog& catalog, const SteelGrade& grade);
    BeamModel(std::vector<double> spans_m, std::vector<double> udls_kn_m,
              std::vector<SectionProps> sections, const SteelGrade& grade);

    [[nodiscard]] std::size_t member_count() const noexcept { return lengths_.size(); }
    [[nodiscard]] double length_mm(std::size_t i) const { return lengths_[i]; }
    [[nodiscard]] double udl_n_per_mm(std::size_t i) const { return udls_[i]; }
    [[nodiscard]] const SectionProps& section(std::size_t i) const { return sections_[i]; }

    /// Direct solve for one arrangement.
    [[nodiscard]] std::vector<MemberForces> analyze(const LoadArrangement& arrangement) const;

    /// End forces everywhere when only `source` carries its UDL.
    [[nodiscard]] std::vector<EndForces> unit_end_forces(std::size_t source) const;
    [[nodiscard]] std::vector<MemberForces> unit_member_forces(std::size_t source) const;

    /// table[source][member] of unit end forces.
    [[nodiscard]] std::vector<std::vector<EndForces>> unit_table() const;

    /// Assembled global matrix over all 2(m+1) DOFs, before supports.
    [[nodiscard]] Eigen::MatrixXd global_stiffness() const;

    /// Reactions at the m+1 supports (upwards positive) implied by member forces.
    [[nodiscard]] static std::vector<double> support_reactions(
        const std::vector<MemberForces>& forces);

private:
    void factorize();
    [[nodiscard]] std::vector<EndForces> solve(const std::vector<double>& member_udls) const;

    std::vector<double> lengths_;  // mm
    std::vector<double> udls_;     // N/mm
    std::vector<SectionProps> sections_;
    SteelGrade grade_;
    std::vector<Eigen::Matrix4d> element_k_;
    Eigen::PartialPivLU<Eigen::MatrixXd> rotational_lu_;
};

/// Convenience wrappers over BeamModel.
[[nodiscard]] std::vector<MemberForces> analyze(const BeamSystem& system,
                                                const LoadArrangement& arrangement,
                                                const SectionCatalog& catalog,
                                                const SteelGrade& grade);
[[nodiscard]] std::vector<MemberForces> unit_member_forces(const BeamSystem& system,
                                                           std::size_t source_member,
                                                           const SectionCatalog& catalog,
                                                           const SteelGrade& grade);

}  // namespace beamforge
