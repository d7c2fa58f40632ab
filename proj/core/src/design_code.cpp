#include "beamforge/design_code.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include "beamforge/error.hpp"

namespace beamforge {

namespace {

// (1 - rho) factor on the moment resistance for a coexisting shear.
double interaction_factor(double shear, double v_pl) {
    const double ratio = std::abs(shear) / v_pl;
    if (ratio <= 0.5) return 1.0;
    const double rho = (2.0 * ratio - 1.0) * (2.0 * ratio - 1.0);
    return std::max(1.0 - rho, 1e-12);
}

}  // namespace

double shear_resistance(const SectionProps& p, const SteelGrade& g) {
    return p.shear_area * g.yield_stress / std::sqrt(3.0);
}

double moment_resistance(const SectionProps& p, const SteelGrade& g) {
    return p.plastic_modulus * g.yield_stress;
}

CheckRatios utilisation(const MemberForces& f, const SectionProps& p, const SteelGrade& g,
                        const CheckOptions& options) {
    const double v_pl = shear_resistance(p, g);
    const double m_pl = moment_resistance(p, g);
    CheckRatios r{};
    r[0] = std::abs(f.shear_start) / v_pl;
    r[2] = std::abs(f.shear_end) / v_pl;
    double m_start = m_pl;
    double m_end = m_pl;
    double m_span = m_pl;
    if (options.mv_interaction) {
        m_start *= interaction_factor(f.shear_start, v_pl);
        m_end *= interaction_factor(f.shear_end, v_pl);
        m_span *= interaction_factor(f.max_span_shear, v_pl);
    }
    r[1] = std::abs(f.moment_start) / m_start;
    r[3] = std::abs(f.moment_end) / m_end;
    r[4] = std::abs(f.max_span_moment) / m_span;
    return r;
}

std::string_view to_string(ArrangementMode mode) {
    return mode == ArrangementMode::exhaustive ? "exhaustive" : "patterned";
}

ArrangementMode arrangement_mode_from_string(std::string_view name) {
    if (name == "exhaustive") return ArrangementMode::exhaustive;
    if (name == "patterned") return ArrangementMode::patterned;
    throw InvalidArgument("design-code", "unknown arrangement mode '" + std::string(name) + "'");
}

ArrangementSet enumerate_arrangements(std::size_t m, ArrangementMode mode) {
    if (m == 0) throw InvalidArgument("design-code", "arrangements need at least one member");
    ArrangementSet set;
    set.mode = mode;

    if (mode == ArrangementMode::exhaustive) {
        if (m > max_exhaustive_members) {
            throw InvalidArgument("design-code", "exhaustive arrangements rejected for m = " +
                                                     std::to_string(m) + " > " +
                                                     std::to_string(max_exhaustive_members));
        }
        const std::uint64_t count = std::uint64_t{1} << m;
        set.arrangements.reserve(count - 1);
        for (std::uint64_t mask = 1; mask < count; ++mask) {
            LoadArrangement a{std::vector<bool>(m, false)};
            for (std::size_t i = 0; i < m; ++i) a.loaded[i] = ((mask >> i) & 1U) != 0;
            set.arrangements.push_back(std::move(a));
        }
        return set;
    }

    std::set<std::vector<bool>> seen;
    const auto add = [&](LoadArrangement a) {
        if (a.empty_load()) return;
        if (seen.insert(a.loaded).second) set.arrangements.push_back(std::move(a));
    };
    add(LoadArrangement::all(m));
    for (std::size_t parity = 0; parity < 2; ++parity) {
        LoadArrangement a{std::vector<bool>(m, false)};
        for (std::size_t i = parity; i < m; i += 2) a.loaded[i] = true;
        add(std::move(a));
    }
    for (std::size_t support = 1; support < m; ++support) {
        LoadArrangement a{std::vector<bool>(m, false)};
        a.loaded[support - 1] = true;
        a.loaded[support] = true;
        add(std::move(a));
    }
    for (std::size_t i = 0; i < m; ++i) add(LoadArrangement::single(m, i));
    return set;
}

double UtilisationReport::max_governing() const {
    double g = 0.0;
    for (double v : governing) g = std::max(g, v);
    return g;
}

UtilisationReport reduce_utilisation(const std::vector<std::vector<MemberForces>>& forces,
                                     const std::vector<SectionProps>& props,
                                     const SteelGrade& grade, const CheckOptions& options) {
    const std::size_t m = props.size();
    const std::size_t c = forces.size();
    UtilisationReport rep;
    rep.per_check.assign(m, CheckRatios{});
    rep.per_arrangement.assign(m, std::vector<double>(c, 0.0));
    rep.governing.assign(m, 0.0);
    rep.governing_arrangement.assign(m, 0);
    rep.governing_check.assign(m, 0);
    for (std::size_t j = 0; j < c; ++j) {
        if (forces[j].size() != m) {
            throw InvalidArgument("design-code", "force table does not match member count");
        }
        for (std::size_t i = 0; i < m; ++i) {
            const CheckRatios r = utilisation(forces[j][i], props[i], grade, options);
            double best = r[0];
            std::size_t best_r = 0;
            for (std::size_t k = 0; k < check_count; ++k) {
                rep.per_check[i][k] = std::max(rep.per_check[i][k], r[k]);
                if (r[k] > best) {
                    best = r[k];
                    best_r = k;
                }
            }
            rep.per_arrangement[i][j] = best;
            if (j == 0 || best > rep.governing[i]) {
                rep.governing[i] = best;
                rep.governing_arrangement[i] = j;
                rep.governing_check[i] = best_r;
            }
        }
    }
    return rep;
}

std::vector<std::vector<MemberForces>> arrangement_forces(const BeamModel& model,
                                                          const ArrangementSet& set) {
    std::vector<std::vector<MemberForces>> out;
    out.reserve(set.size());
    for (const auto& a : set.arrangements) out.push_back(model.analyze(a));
    return out;
}

UtilisationReport governing_utilisation(const BeamModel& model, const ArrangementSet& set,
                                        const SteelGrade& grade, const CheckOptions& options) {
    std::vector<SectionProps> props;
    props.reserve(model.member_count());
    for (std::size_t i = 0; i < model.member_count(); ++i) props.push_back(model.section(i));
    return reduce_utilisation(arrangement_forces(model, set), props, grade, options);
}

UtilisationReport governing_utilisation(const BeamSystem& system, const SectionCatalog& catalog,
                                        const SteelGrade& grade, const ArrangementSet& set,
                                        const CheckOptions& options) {
    return governing_utilisation(BeamModel(system, catalog, grade), set, grade, options);
}

}  // namespace beamforge
