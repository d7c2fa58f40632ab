#pragma once

/**
 * @file sections.hpp
 * @brief Custom doubly-symmetric I-section family and its catalog.
 *
 * Every section is fixed by its web thickness t_w; the remaining dimensions
 * follow constant ratios to t_w. The catalog spaces t_w linearly, so catalog
 * index order, depth order and stiffness order all coincide.
 */

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "beamforge/core_model.hpp"

namespace beamforge {

namespace section_ratios {
inline constexpr double web_depth = 43.9;         ///< d_w / t_w
inline constexpr double flange_thickness = 1.61;  ///< t_f / t_w
inline constexpr double flange_breadth = 18.5;    ///< b_f / t_w
inline constexpr double min_web_thickness = 3.0;  ///< mm
inline constexpr double max_web_thickness = 45.0;
}  // namespace section_ratios

/// I-section dimensions in mm.
struct SectionDims {
    double web_thickness = 0.0;     ///< t_w
    double web_depth = 0.0;         ///< d_w, clear depth between flanges
    double flange_thickness = 0.0;  ///< t_f
    double flange_breadth = 0.0;    ///< b_f

    [[nodiscard]] static SectionDims from_web_thickness(double t_w);
};

/// I   = b_f (d_w + 2 t_f)^3 / 12 - (b_f - t_w) d_w^3 / 12
/// W_pl= b_f t_f (d_w + t_f) + t_w d_w^2 / 4
/// A_z = t_w (d_w + t_f)
[[nodiscard]] SectionProps compute_props(const SectionDims& dims);

struct SectionRecord {
    int index = 0;
    SectionDims dims;
    SectionProps props;
};

class SectionCatalog {
public:
    SectionCatalog() = default;
    explicit SectionCatalog(std::vector<SectionRecord> records);

    /// t_w linearly spaced over [3, 45] mm; throws InvalidArgument for count < 2.
    [[nodiscard]] static SectionCatalog generate(std::size_t count = 1000);

    [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
    [[nodiscard]] const SectionRecord& operator[](std::size_t i) const { return records_[i]; }
    [[nodiscard]] const SectionRecord& at(int index) const;
    [[nodiscard]] const SectionProps& props(int index) const { return at(index).props; }
    [[nodiscard]] const std::vector<SectionRecord>& records() const noexcept { return records_; }

    /// Lowest index whose props satisfy `ok`, assuming `ok` is monotone
    /// (false ... false true ... true) in index. Returns -1 when none does.
    [[nodiscard]] int lowest_index_where(const std::function<bool(const SectionProps&)>& ok) const;

    /// Index of the section whose property vector is exactly `props`, or -1.
    [[nodiscard]] int find(const SectionProps& props, double rel_tol = 1e-12) const;

    /// index,t_w_mm,d_w_mm,t_f_mm,b_f_mm,I_cm4,A_z_cm2,W_pl_cm3
    void write_csv(std::ostream& os) const;

private:
    std::vector<SectionRecord> records_;
};

}  // namespace beamforge
