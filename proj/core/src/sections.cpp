#include "beamforge/sections.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "beamforge/error.hpp"

namespace beamforge {

SectionDims SectionDims::from_web_thickness(double t_w) {
    return {t_w, section_ratios::web_depth * t_w, section_ratios::flange_thickness * t_w,
            section_ratios::flange_breadth * t_w};
}

SectionProps compute_props(const SectionDims& d) {
    if (!(d.web_thickness > 0.0 && d.web_depth > 0.0 && d.flange_thickness > 0.0 &&
          d.flange_breadth > 0.0)) {
        throw InvalidArgument("section-factory", "section dimensions must be positive");
    }
    const double tw = d.web_thickness;
    const double dw = d.web_depth;
    const double tf = d.flange_thickness;
    const double bf = d.flange_breadth;
    const double h = dw + 2.0 * tf;

    SectionProps p;
    p.second_moment = bf * h * h * h / 12.0 - (bf - tw) * dw * dw * dw / 12.0;
    p.plastic_modulus = bf * tf * (dw + tf) + tw * dw * dw / 4.0;
    p.shear_area = tw * (dw + tf);
    return p;
}

SectionCatalog::SectionCatalog(std::vector<SectionRecord> records) : records_(std::move(records)) {
    std::stable_sort(records_.begin(), records_.end(), [](const auto& a, const auto& b) {
        return a.props.second_moment < b.props.second_moment;
    });
    for (std::size_t i = 0; i < records_.size(); ++i) records_[i].index = static_cast<int>(i);
}

SectionCatalog SectionCatalog::generate(std::size_t count) {
    if (count < 2) {
        throw InvalidArgument("section-factory", "catalog needs at least 2 sections, got " +
                                                     std::to_string(count));
    }
    const double lo = section_ratios::min_web_thickness;
    const double hi = section_ratios::max_web_thickness;
    const double step = (hi - lo) / static_cast<double>(count - 1);

    std::vector<SectionRecord> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        // pin the last entry to the upper bound exactly
        const double tw = (i + 1 == count) ? hi : lo + step * static_cast<double>(i);
        SectionRecord r;
        r.index = static_cast<int>(i);
        r.dims = SectionDims::from_web_thickness(tw);
        r.props = compute_props(r.dims);
        records.push_back(r);
    }
    return SectionCatalog(std::move(records));
}

const SectionRecord& SectionCatalog::at(int index) const {
    if (index < 0 || static_cast<std::size_t>(index) >= records_.size()) {
        throw InvalidArgument("section-factory", "section index " + std::to_string(index) +
                                                     " outside catalog of " +
                                                     std::to_string(records_.size()));
    }
    return records_[static_cast<std::size_t>(index)];
}

int SectionCatalog::lowest_index_where(const std::function<bool(const SectionProps&)>& ok) const {
    std::size_t lo = 0;
    std::size_t hi = records_.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (ok(records_[mid].props)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo == records_.size() ? -1 : static_cast<int>(lo);
}

int SectionCatalog::find(const SectionProps& p, double rel_tol) const {
    const auto close = [rel_tol](double a, double b) {
        return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
    };
    const auto it = std::lower_bound(
        records_.begin(), records_.end(), p.second_moment * (1.0 - rel_tol),
        [](const SectionRecord& r, double v) { return r.props.second_moment < v; });
    for (auto cur = it; cur != records_.end(); ++cur) {
        if (cur->props.second_moment > p.second_moment * (1.0 + rel_tol)) break;
        if (close(cur->props.second_moment, p.second_moment) &&
            close(cur->props.shear_area, p.shear_area) &&
            close(cur->props.plastic_modulus, p.plastic_modulus)) {
            return cur->index;
        }
    }
    return -1;
}

void SectionCatalog::write_csv(std::ostream& os) const {
    os << "index,t_w_mm,d_w_mm,t_f_mm,b_f_mm,I_cm4,A_z_cm2,W_pl_cm3\n";
    char buf[512];
    for (const auto& r : records_) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.index,
                      r.dims.web_thickness, r.dims.web_depth, r.dims.flange_thickness,
                      r.dims.flange_breadth, r.props.second_moment / units::mm4_per_cm4,
                      r.props.shear_area / units::mm2_per_cm2,
                      r.props.plastic_modulus / units::mm3_per_cm3);
        os << buf;
    }
}

}  // namespace beamforge
