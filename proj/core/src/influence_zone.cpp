#include "beamforge/influence_zone.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "beamforge/error.hpp"
#include "beamforge/sampling.hpp"

namespace beamforge {

namespace {

constexpr std::uint64_t izone_stream_tag = 0x1201;

}  // namespace

double captured_utilisation(const BeamModel& model,
                            const std::vector<std::vector<EndForces>>& table, std::size_t g,
                            std::size_t k, const ArrangementSet& set, const SteelGrade& grade,
                            const CheckOptions& checks) {
    const std::size_t m = model.member_count();
    if (g >= m) throw InvalidArgument("influence-zone", "design member out of range");
    const std::size_t lo = g >= k ? g - k : 0;
    const std::size_t hi = std::min(m - 1, g + k);
    double u_cap = 0.0;
    for (const auto& a : set.arrangements) {
        EndForces sum;
        for (std::size_t s = lo; s <= hi; ++s) {
            if (a.loaded[s]) sum += table[s][g];
        }
        const double w = a.loaded[g] ? model.udl_n_per_mm(g) : 0.0;
        const MemberForces f = member_forces_from_ends(sum, w, model.length_mm(g));
        u_cap = std::max(u_cap, governing(utilisation(f, model.section(g), grade, checks)));
    }
    return u_cap;
}

int member_influence_zone(const BeamModel& model, const std::vector<std::vector<EndForces>>& table,
                          std::size_t g, const ArrangementSet& set, const SteelGrade& grade,
                          double epsilon_max, const CheckOptions& checks) {
    const std::size_t m = model.member_count();
    const double u_true = captured_utilisation(model, table, g, m - 1, set, grade, checks);
    if (!(u_true > 0.0)) {
        throw InvalidArgument("influence-zone", "member " + std::to_string(g) +
                                                    " has zero true utilisation");
    }
    for (std::size_t k = 0; k + 1 < m; ++k) {
        const double u_cap = captured_utilisation(model, table, g, k, set, grade, checks);
        if (std::abs(1.0 - u_cap / u_true) <= epsilon_max) return static_cast<int>(k);
    }
    return static_cast<int>(m - 1);
}

std::vector<int> system_influence_zones(const BeamSystem& designed, const SectionCatalog& catalog,
                                        const SteelGrade& grade, const ArrangementSet& set,
                                        double epsilon_max, const CheckOptions& checks) {
    const BeamModel model(designed, catalog, grade);
    const auto table = model.unit_table();
    std::vector<int> ks;
    ks.reserve(model.member_count());
    for (std::size_t g = 0; g < model.member_count(); ++g) {
        ks.push_back(member_influence_zone(model, table, g, set, grade, epsilon_max, checks));
    }
    return ks;
}

int member_influence_zone(const BeamSystem& designed, std::size_t g, const SectionCatalog& catalog,
                          const SteelGrade& grade, const ArrangementSet& set, double epsilon_max,
                          const CheckOptions& checks) {
    const BeamModel model(designed, catalog, grade);
    return member_influence_zone(model, model.unit_table(), g, set, grade, epsilon_max, checks);
}

InfluenceZoneResult estimate_k_max(const DesignConstraints& constraints,
                                   const SectionCatalog& catalog, const SteelGrade& grade,
                                   std::size_t samples, std::size_t m_probe, double epsilon_max,
                                   std::uint64_t seed, const InfluenceZoneOptions& options) {
    if (samples < 1) throw InvalidArgument("influence-zone", "samples must be at least 1");
    if (m_probe < 3) throw InvalidArgument("influence-zone", "m_probe must be at least 3");
    const ArrangementSet set = enumerate_arrangements(m_probe, options.mode);

    std::vector<std::optional<std::vector<int>>> zones(samples);
    parallel_for(samples, options.threads, [&](std::size_t id) {
        Rng rng(substream_seed(seed ^ izone_stream_tag, id));
        const BeamSystem brief = random_system(m_probe, constraints, rng);
        try {
            const DesignResult d = design(brief, catalog, grade, constraints, set, options.design);
            if (!d.compliant) return;
            zones[id] = system_influence_zones(d.system, catalog, grade, set, epsilon_max,
                                               options.design.checks);
        } catch (const NoCompliantSection&) {
        } catch (const ConvergenceError&) {
        }
    });

    InfluenceZoneResult r;
    r.epsilon_max = epsilon_max;
    r.m = m_probe;
    r.systems_requested = samples;
    r.histogram.assign(m_probe, 0);
    double sum = 0.0;
    for (std::size_t id = 0; id < samples; ++id) {
        if (!zones[id]) {
            ++r.design_failures;
            continue;
        }
        ++r.systems_used;
        for (std::size_t g = 0; g < zones[id]->size(); ++g) {
            const int k = (*zones[id])[g];
            r.entries.push_back({id, g, k});
            r.per_member_k.push_back(k);
            r.k_max = std::max(r.k_max, k);
            r.histogram[static_cast<std::size_t>(k)] += 1;
            sum += k;
        }
    }
    if (!r.per_member_k.empty()) r.k_mean = sum / static_cast<double>(r.per_member_k.size());
    return r;
}

}  // namespace beamforge
