#include "beamforge/core_model.hpp"

#include <cmath>
#include <sstream>

#include "beamforge/error.hpp"

namespace beamforge {

namespace {

constexpr double grid_tolerance = 1e-9;

// Position of value on a grid starting at lo with step `interval`, if it is
// within tolerance of an integer.
std::optional<std::size_t> grid_position(double value, double lo, double interval, double hi) {
    if (!std::isfinite(value)) return std::nullopt;
    const double q = (value - lo) / interval;
    const double q_max = (hi - lo) / interval;
    const double nearest = std::round(q);
    const double scale = std::max(1.0, std::abs(q));
    if (std::abs(q - nearest) > grid_tolerance * scale) return std::nullopt;
    if (nearest < 0.0 || nearest > std::round(q_max)) return std::nullopt;
    return static_cast<std::size_t>(nearest);
}

bool in_range(double value, double lo, double hi, double interval) {
    const double slack = grid_tolerance * interval;
    return value >= lo - slack && value <= hi + slack;
}

void check_axis(const char* name, double lo, double interval, double hi) {
    if (!(lo < hi)) {
        throw InvalidArgument("core-model", std::string(name) + " min must be below max");
    }
    if (!(interval > 0.0)) {
        throw InvalidArgument("core-model", std::string(name) + " interval must be positive");
    }
    const double q = (hi - lo) / interval;
    if (std::abs(q - std::round(q)) > grid_tolerance * std::max(1.0, q)) {
        throw InvalidArgument("core-model",
                              std::string(name) + " interval does not divide the range");
    }
}

}  // namespace

void SteelGrade::validate() const {
    if (!(yield_stress > 0.0 && youngs_modulus > 0.0 && shear_modulus > 0.0)) {
        throw InvalidArgument("core-model", "steel grade constants must be positive");
    }
    if (!(shear_modulus < youngs_modulus)) {
        throw InvalidArgument("core-model", "shear modulus must be below Young's modulus");
    }
}

void DesignConstraints::validate() const {
    check_axis("udl", udl_min, udl_interval, udl_max);
    check_axis("span", span_min, span_interval, span_max);
    if (!(u_target > 0.0 && u_target <= 1.0)) {
        throw InvalidArgument("core-model", "u_target must lie in (0, 1]");
    }
    if (!(epsilon_max > 0.0 && epsilon_max < 1.0)) {
        throw InvalidArgument("core-model", "epsilon_max must lie in (0, 1)");
    }
}

std::size_t DesignConstraints::span_grid_size() const {
    return static_cast<std::size_t>(std::round((span_max - span_min) / span_interval)) + 1;
}

std::size_t DesignConstraints::udl_grid_size() const {
    return static_cast<std::size_t>(std::round((udl_max - udl_min) / udl_interval)) + 1;
}

double DesignConstraints::span_at(std::size_t grid_index) const {
    return span_min + static_cast<double>(grid_index) * span_interval;
}

double DesignConstraints::udl_at(std::size_t grid_index) const {
    return udl_min + static_cast<double>(grid_index) * udl_interval;
}

std::optional<std::size_t> DesignConstraints::span_index(double span_m) const {
    return grid_position(span_m, span_min, span_interval, span_max);
}

std::optional<std::size_t> DesignConstraints::udl_index(double udl_kn_m) const {
    return grid_position(udl_kn_m, udl_min, udl_interval, udl_max);
}

ValidationResult validate_system(const BeamSystem& system, const DesignConstraints& c) {
    const auto fail = [](std::string reason) { return ValidationResult{false, std::move(reason)}; };
    const std::size_t m = system.spans.size();
    if (m == 0) return fail("system has no members");
    if (system.udls.size() != m) {
        return fail("length mismatch: " + std::to_string(m) + " spans but " +
                    std::to_string(system.udls.size()) + " UDLs");
    }
    if (system.section_indices && system.section_indices->size() != m) {
        return fail("length mismatch: " + std::to_string(system.section_indices->size()) +
                    " section indices for " + std::to_string(m) + " members");
    }
    for (std::size_t i = 0; i < m; ++i) {
        std::ostringstream os;
        const double L = system.spans[i];
        const double w = system.udls[i];
        if (!in_range(L, c.span_min, c.span_max, c.span_interval)) {
            os << "member " << i << ": span " << L << " m out of range [" << c.span_min << ", "
               << c.span_max << "]";
            return fail(os.str());
        }
        if (!c.span_index(L)) {
            os << "member " << i << ": span " << L << " m is off the " << c.span_interval
               << " m grid";
            return fail(os.str());
        }
        if (!in_range(w, c.udl_min, c.udl_max, c.udl_interval)) {
            os << "member " << i << ": UDL " << w << " kN/m out of range [" << c.udl_min << ", "
               << c.udl_max << "]";
            return fail(os.str());
        }
        if (!c.udl_index(w)) {
            os << "member " << i << ": UDL " << w << " kN/m is off the " << c.udl_interval
               << " kN/m grid";
            return fail(os.str());
        }
    }
    return {};
}

void require_valid_system(const BeamSystem& system, const DesignConstraints& constraints) {
    if (auto result = validate_system(system, constraints); !result) {
        throw InvalidArgument("core-model", result.reason);
    }
}

}  // namespace beamforge
