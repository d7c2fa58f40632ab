#include "beamforge/analysis.hpp"

#include <cmath>
#include <string>

#include "beamforge/error.hpp"

namespace beamforge {

namespace {

constexpr double min_rcond = 1e-13;

// Fixed-end actions of a fully fixed member under a downward UDL, expressed
// as forces from the nodes onto the member in DOF order [v1, th1, v2, th2]
// (up / counter-clockwise positive). Identical for Timoshenko and
// Euler-Bernoulli elements since the load is symmetric.
Eigen::Vector4d fixed_end_actions(double w, double L) {
    return {w * L / 2.0, w * L * L / 12.0, w * L / 2.0, -w * L * L / 12.0};
}

EndForces to_internal(const Eigen::Vector4d& f) {
    return {f[0], -f[1], -f[2], f[3]};
}

}  // namespace

LoadArrangement LoadArrangement::single(std::size_t m, std::size_t member) {
    LoadArrangement a{std::vector<bool>(m, false)};
    a.loaded.at(member) = true;
    return a;
}

bool LoadArrangement::empty_load() const {
    for (bool b : loaded) {
        if (b) return false;
    }
    return true;
}

MemberForces member_forces_from_ends(const EndForces& e, double w, double L) {
    MemberForces f;
    f.shear_start = e.shear_start;
    f.moment_start = e.moment_start;
    f.shear_end = e.shear_end;
    f.moment_end = e.moment_end;

    f.max_span_moment = e.moment_start;
    f.max_span_position = 0.0;
    f.max_span_shear = e.shear_start;
    if (std::abs(e.moment_end) > std::abs(f.max_span_moment)) {
        f.max_span_moment = e.moment_end;
        f.max_span_position = L;
        f.max_span_shear = e.shear_end;
    }
    if (w > 0.0) {
        const double x = e.shear_start / w;  // V(x) = 0
        if (x > 0.0 && x < L) {
            const double m = e.moment_start + e.shear_start * x - w * x * x / 2.0;
            if (std::abs(m) > std::abs(f.max_span_moment)) {
                f.max_span_moment = m;
                f.max_span_position = x;
                f.max_span_shear = 0.0;
            }
        }
    }
    return f;
}

double shear_parameter(const SectionProps& s, double L, const SteelGrade& g) {
    return 12.0 * g.youngs_modulus * s.second_moment / (s.shear_area * g.shear_modulus * L * L);
}

Eigen::Matrix4d local_stiffness(const SectionProps& s, double L, const SteelGrade& g) {
    if (!(L > 0.0)) {
        throw InvalidArgument("analysis-engine", "member length must be positive");
    }
    if (!(s.second_moment > 0.0 && s.shear_area > 0.0)) {
        throw InvalidArgument("analysis-engine", "section properties must be positive");
    }
    const double phi = shear_parameter(s, L, g);
    const double c = g.youngs_modulus * s.second_moment / (L * L * L * (1.0 + phi));
    const double L2 = L * L;
    Eigen::Matrix4d k;
    // clang-format off
    k << 12.0,      6.0 * L,              -12.0,    6.0 * L,
         6.0 * L,   (4.0 + phi) * L2,     -6.0 * L, (2.0 - phi) * L2,
         -12.0,     -6.0 * L,             12.0,     -6.0 * L,
         6.0 * L,   (2.0 - phi) * L2,     -6.0 * L, (4.0 + phi) * L2;
    // clang-format on
    return c * k;
}

Eigen::Matrix4d local_stiffness_euler(double EI, double L) {
    const double c = EI / (L * L * L);
    const double L2 = L * L;
    Eigen::Matrix4d k;
    // clang-format off
    k << 12.0,    6.0 * L,   -12.0,    6.0 * L,
         6.0 * L, 4.0 * L2,  -6.0 * L, 2.0 * L2,
         -12.0,   -6.0 * L,  12.0,     -6.0 * L,
         6.0 * L, 2.0 * L2,  -6.0 * L, 4.0 * L2;
    // clang-format on
    return c * k;
}

BeamModel::BeamModel(const BeamSystem& system, const SectionCatalog& catalog,
                     const SteelGrade& grade)
    : grade_(grade) {
    if (!system.section_indices) {
        throw InvalidArgument("analysis-engine", "system has no section indices assigned");
    }
    const std::size_t m = system.member_count();
    if (system.udls.size() != m || system.section_indices->size() != m) {
        throw InvalidArgument("analysis-engine", "system vectors differ in length");
    }
    lengths_.reserve(m);
    udls_.reserve(m);
    sections_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        lengths_.push_back(units::m_to_mm(system.spans[i]));
        udls_.push_back(units::kn_per_m_to_n_per_mm(system.udls[i]));
        sections_.push_back(catalog.props((*system.section_indices)[i]));
    }
    factorize();
}

BeamModel::BeamModel(std::vector<double> spans_m, std::vector<double> udls_kn_m,
                     std::vector<SectionProps> sections, const SteelGrade& grade)
    : sections_(std::move(sections)), grade_(grade) {
    if (spans_m.size() != udls_kn_m.size() || spans_m.size() != sections_.size()) {
        throw InvalidArgument("analysis-engine", "system vectors differ in length");
    }
    for (double L : spans_m) lengths_.push_back(units::m_to_mm(L));
    for (double w : udls_kn_m) udls_.push_back(units::kn_per_m_to_n_per_mm(w));
    factorize();
}

void BeamModel::factorize() {
    const std::size_t m = lengths_.size();
    if (m == 0) throw InvalidArgument("analysis-engine", "system has no members");
    element_k_.clear();
    element_k_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        element_k_.push_back(local_stiffness(sections_[i], lengths_[i], grade_));
    }
    // Vertical DOFs are restrained at every node; keep the rotational block.
    const auto n = static_cast<Eigen::Index>(m + 1);
    Eigen::MatrixXd k_rr = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < m; ++i) {
        const auto a = static_cast<Eigen::Index>(i);
        const Eigen::Matrix4d& k = element_k_[i];
        k_rr(a, a) += k(1, 1);
        k_rr(a, a + 1) += k(1, 3);
        k_rr(a + 1, a) += k(3, 1);
        k_rr(a + 1, a + 1) += k(3, 3);
    }
    rotational_lu_.compute(k_rr);
    const double rc = rotational_lu_.rcond();
    if (!(rc > min_rcond)) {
        throw SingularSystem("analysis-engine",
                             "global stiffness matrix is singular (rcond " + std::to_string(rc) +
                                 "); supports are insufficient");
    }
}

Eigen::MatrixXd BeamModel::global_stiffness() const {
    const std::size_t m = lengths_.size();
    const auto n = static_cast<Eigen::Index>(2 * (m + 1));
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < m; ++i) {
        K.block<4, 4>(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(2 * i)) +=
            element_k_[i];
    }
    return K;
}

std::vector<EndForces> BeamModel::solve(const std::vector<double>& w) const {
    const std::size_t m = lengths_.size();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m + 1));
    for (std::size_t i = 0; i < m; ++i) {
        if (w[i] == 0.0) continue;
        const Eigen::Vector4d fe = fixed_end_actions(w[i], lengths_[i]);
        rhs[static_cast<Eigen::Index>(i)] -= fe[1];
        rhs[static_cast<Eigen::Index>(i + 1)] -= fe[3];
    }
    const Eigen::VectorXd theta = rotational_lu_.solve(rhs);

    std::vector<EndForces> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Eigen::Vector4d d(0.0, theta[static_cast<Eigen::Index>(i)], 0.0,
                                theta[static_cast<Eigen::Index>(i + 1)]);
        Eigen::Vector4d f = element_k_[i] * d;
        if (w[i] != 0.0) f += fixed_end_actions(w[i], lengths_[i]);
        out.push_back(to_internal(f));
    }
    return out;
}

std::vector<MemberForces> BeamModel::analyze(const LoadArrangement& arrangement) const {
    const std::size_t m = lengths_.size();
    if (arrangement.size() != m) {
        throw InvalidArgument("analysis-engine", "arrangement length " +
                                                     std::to_string(arrangement.size()) +
                                                     " does not match " + std::to_string(m) +
                                                     " members");
    }
    std::vector<double> w(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (arrangement.loaded[i]) w[i] = udls_[i];
    }
    const auto ends = solve(w);
    std::vector<MemberForces> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        out.push_back(member_forces_from_ends(ends[i], w[i], lengths_[i]));
    }
    return out;
}

std::vector<EndForces> BeamModel::unit_end_forces(std::size_t source) const {
    const std::size_t m = lengths_.size();
    if (source >= m) {
        throw InvalidArgument("analysis-engine", "source member " + std::to_string(source) +
                                                     " out of range");
    }
    std::vector<double> w(m, 0.0);
    w[source] = udls_[source];
    return solve(w);
}

std::vector<MemberForces> BeamModel::unit_member_forces(std::size_t source) const {
    const auto ends = unit_end_forces(source);
    std::vector<MemberForces> out;
    out.reserve(ends.size());
    for (std::size_t i = 0; i < ends.size(); ++i) {
        out.push_back(member_forces_from_ends(ends[i], i == source ? udls_[i] : 0.0, lengths_[i]));
    }
    return out;
}

std::vector<std::vector<EndForces>> BeamModel::unit_table() const {
    std::vector<std::vector<EndForces>> table;
    table.reserve(lengths_.size());
    for (std::size_t s = 0; s < lengths_.size(); ++s) table.push_back(unit_end_forces(s));
    return table;
}

std::vector<double> BeamModel::support_reactions(const std::vector<MemberForces>& forces) {
    const std::size_t m = forces.size();
    std::vector<double> r(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        r[i] += forces[i].shear_start;
        r[i + 1] -= forces[i].shear_end;
    }
    return r;
}

std::vector<MemberForces> analyze(const BeamSystem& system, const LoadArrangement& arrangement,
                                  const SectionCatalog& catalog, const SteelGrade& grade) {
    return BeamModel(system, catalog, grade).analyze(arrangement);
}

std::vector<MemberForces> unit_member_forces(const BeamSystem& system, std::size_t source_member,
                                             const SectionCatalog& catalog,
                                             const SteelGrade& grade) {
    return BeamModel(system, catalog, grade).unit_member_forces(source_member);
}

}  // namespace beamforge
