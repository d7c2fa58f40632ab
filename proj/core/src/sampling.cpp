#include "beamforge/sampling.hpp"

namespace beamforge {

BeamSystem random_system(std::size_t m, const DesignConstraints& c, Rng& rng) {
    std::uniform_int_distribution<std::size_t> span_pick(0, c.span_grid_size() - 1);
    std::uniform_int_distribution<std::size_t> udl_pick(0, c.udl_grid_size() - 1);
    BeamSystem s;
    s.spans.reserve(m);
    s.udls.reserve(m);
    for (std::size_t i = 0; i < m; ++i) s.spans.push_back(c.span_at(span_pick(rng)));
    for (std::size_t i = 0; i < m; ++i) s.udls.push_back(c.udl_at(udl_pick(rng)));
    return s;
}

}  // namespace beamforge
