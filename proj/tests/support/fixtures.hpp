#pragma once

#include <beamforge/dataset.hpp>
#include <beamforge/sections.hpp>

namespace beamforge::fixture {

inline const SectionCatalog& catalog() {
    static const SectionCatalog c = SectionCatalog::generate();
    return c;
}

/// Small k = 2 dataset shared by the training and study tests.
inline const DatasetBundle& bundle() {
    static const DatasetBundle b = [] {
        DatasetOptions opt;
        opt.block_size = 64;
        return generate(DesignConstraints{}, catalog(), SteelGrade{}, 2, 600, 5, opt);
    }();
    return b;
}

}  // namespace beamforge::fixture
