#include "beamforge/designer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "beamforge/error.hpp"

namespace beamforge {

namespace {

std::vector<SectionProps> props_of(const std::vector<int>& indices,
                                   const SectionCatalog& catalog) {
    std::vector<SectionProps> out;
    out.reserve(indices.size());
    for (int k : indices) out.push_back(catalog.props(k));
    return out;
}

[[noreturn]] void throw_no_section(std::size_t member, double span, double udl) {
    std::ostringstream os;
    os << "no catalog section satisfies member " << member << " (L = " << span
       << " m, w = " << udl << " kN/m); demand exceeds the catalog envelope";
    throw NoCompliantSection("designer", os.str());
}

}  // namespace

int initial_section_index(double span_m, double udl_kn_m, const SectionCatalog& catalog,
                          const SteelGrade& grade, double u_target) {
    const double L = units::m_to_mm(span_m);
    const double w = units::kn_per_m_to_n_per_mm(udl_kn_m);
    const double m_dem = w * L * L / 8.0;
    const double v_dem = w * L / 2.0;
    return catalog.lowest_index_where([&](const SectionProps& p) {
        return m_dem <= u_target * moment_resistance(p, grade) &&
               v_dem <= u_target * shear_resistance(p, grade);
    });
}

int select_section(const std::vector<MemberForces>& forces, const SectionCatalog& catalog,
                   const SteelGrade& grade, double u_target, const CheckOptions& checks) {
    if (!checks.mv_interaction) {
        double v_dem = 0.0;
        double m_dem = 0.0;
        for (const auto& f : forces) {
            v_dem = std::max({v_dem, std::abs(f.shear_start), std::abs(f.shear_end)});
            m_dem = std::max({m_dem, std::abs(f.moment_start), std::abs(f.moment_end),
                              std::abs(f.max_span_moment)});
        }
        return catalog.lowest_index_where([&](const SectionProps& p) {
            return v_dem / shear_resistance(p, grade) <= u_target &&
                   m_dem / moment_resistance(p, grade) <= u_target;
        });
    }
    return catalog.lowest_index_where([&](const SectionProps& p) {
        for (const auto& f : forces) {
            if (governing(utilisation(f, p, grade, checks)) > u_target) return false;
        }
        return true;
    });
}

DesignResult design(const BeamSystem& system, const SectionCatalog& catalog,
                    const SteelGrade& grade, const DesignConstraints& constraints,
                    const ArrangementSet& set, const DesignOptions& options) {
    const std::size_t m = system.member_count();
    if (m == 0 || system.udls.size() != m) {
        throw InvalidArgument("designer", "system spans and UDLs must be non-empty and equal");
    }
    for (const auto& a : set.arrangements) {
        if (a.size() != m) throw InvalidArgument("designer", "arrangement set built for another m");
    }
    const double u_target = constraints.u_target;

    std::vector<int> indices;
    if (options.warm_start && system.section_indices && system.section_indices->size() == m) {
        indices = *system.section_indices;
    } else {
        indices.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            indices[i] =
                initial_section_index(system.spans[i], system.udls[i], catalog, grade, u_target);
            if (indices[i] < 0) throw_no_section(i, system.spans[i], system.udls[i]);
        }
    }

    DesignResult result;
    std::deque<std::vector<int>> history{indices};
    for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
        const auto props = props_of(indices, catalog);
        const BeamModel model(system.spans, system.udls, props, grade);
        const auto forces = arrangement_forces(model, set);

        std::vector<int> next(m);
        std::vector<MemberForces> member_states(forces.size());
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < forces.size(); ++j) member_states[j] = forces[j][i];
            next[i] = select_section(member_states, catalog, grade, u_target, options.checks);
            if (next[i] < 0) throw_no_section(i, system.spans[i], system.udls[i]);
        }

        if (next == indices) {
            result.system = system;
            result.system.section_indices = indices;
            result.report = reduce_utilisation(forces, props, grade, options.checks);
            result.sweeps = sweep;
            result.compliant = result.report.max_governing() < 1.0;
            return result;
        }

        // history.back() == indices; a match further back closes a cycle.
        const std::size_t depth = std::min(history.size(), options.max_cycle_period);
        for (std::size_t back = 2; back <= depth; ++back) {
            const std::size_t start = history.size() - back;
            if (history[start] != next) continue;
            for (std::size_t h = start; h < history.size(); ++h) {
                for (std::size_t i = 0; i < m; ++i) next[i] = std::max(next[i], history[h][i]);
            }
            result.cycle_resolved = true;
            break;
        }
        history.push_back(next);
        if (history.size() > options.max_cycle_period + 1) history.pop_front();
        indices = std::move(next);
    }
    throw ConvergenceError("designer", "section indices still changing after " +
                                           std::to_string(options.max_sweeps) + " sweeps");
}

}  // namespace beamforge
