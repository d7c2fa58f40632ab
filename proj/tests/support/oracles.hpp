#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. None of them touch the stiffness assembly in the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <beamforge/analysis.hpp>
#include <beamforge/design_code.hpp>
#include <beamforge/nn.hpp>

namespace beamforge::oracle {

inline double rel_err(double a, double b, double floor = 1.0) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Gaussian elimination with partial pivoting on a dense copy.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        }
        std::swap(a[c], a[p]);
        std::swap(b[c], b[p]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

/// Flexibility (three-moment) method with shear deformation. Spans in mm,
/// loads in N/mm (zero for unloaded spans). Returns the member end forces in
/// the library's convention; the redundants are the interior support
/// moments, hogging positive.
inline std::vector<EndForces> flexibility_end_forces(const std::vector<double>& lengths,
                                                     const std::vector<double>& loads,
                                                     const std::vector<SectionProps>& sections,
                                                     const SteelGrade& grade) {
    const std::size_t m = lengths.size();
    std::vector<double> a(m), b(m), load_rot(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double L = lengths[j];
        const double ei = grade.youngs_modulus * sections[j].second_moment;
        const double ga = grade.shear_modulus * sections[j].shear_area;
        a[j] = L / (3.0 * ei) + 1.0 / (ga * L);
        b[j] = L / (6.0 * ei) - 1.0 / (ga * L);
        load_rot[j] = loads[j] * L * L * L / (24.0 * ei);
    }
    std::vector<double> x(m + 1, 0.0);
    if (m > 1) {
        const std::size_t n = m - 1;
        std::vector<std::vector<double>> f(n, std::vector<double>(n, 0.0));
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            // support i + 1 sits between spans i and i + 1
            f[i][i] = a[i] + a[i + 1];
            if (i > 0) f[i][i - 1] = b[i];
            if (i + 1 < n) f[i][i + 1] = b[i + 1];
            rhs[i] = load_rot[i] + load_rot[i + 1];
        }
        const auto sol = solve_dense(f, rhs);
        for (std::size_t i = 0; i < n; ++i) x[i + 1] = sol[i];
    }
    std::vector<EndForces> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double L = lengths[j];
        const double m1 = -x[j];
        const double m2 = -x[j + 1];
        const double v1 = (m2 - m1) / L + loads[j] * L / 2.0;
        out[j] = {v1, m1, v1 - loads[j] * L, m2};
    }
    return out;
}

/// Captured utilisation by direct re-analysis: members outside the window
/// lose their load and the reduced arrangement is solved from scratch.
inline double brute_force_captured(const BeamModel& model, std::size_t g, std::size_t k,
                                   const ArrangementSet& set, const SteelGrade& grade) {
    const std::size_t m = model.member_count();
    double u = 0.0;
    for (const auto& arr : set.arrangements) {
        LoadArrangement reduced{std::vector<bool>(m, false)};
        bool any = false;
        for (std::size_t s = 0; s < m; ++s) {
            const std::size_t d = s > g ? s - g : g - s;
            reduced.loaded[s] = arr.loaded[s] && d <= k;
            any = any || reduced.loaded[s];
        }
        if (!any) continue;
        const auto forces = model.analyze(reduced);
        u = std::max(u, governing(utilisation(forces[g], model.section(g), grade)));
    }
    return u;
}

inline int brute_force_zone(const BeamModel& model, std::size_t g, const ArrangementSet& set,
                            const SteelGrade& grade, double epsilon_max) {
    const std::size_t m = model.member_count();
    std::vector<double> caps(m);
    for (std::size_t k = 0; k < m; ++k) caps[k] = brute_force_captured(model, g, k, set, grade);
    const double u_true = caps[m - 1];
    for (std::size_t k = 0; k < m; ++k) {
        if (std::abs(1.0 - caps[k] / u_true) <= epsilon_max) return static_cast<int>(k);
    }
    return static_cast<int>(m - 1);
}

/// Central differences of f at x, one coordinate at a time.
inline Eigen::VectorXd finite_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                         const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd p = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        p[i] = x[i] + h;
        const double up = f(p);
        p[i] = x[i] - h;
        const double down = f(p);
        p[i] = x[i];
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

/// Worst relative mismatch between analytic and numeric gradients. Entries
/// near zero are compared on the gradient's scale, and never below 1e-5,
/// which is where central-difference roundoff lives at h = 1e-6.
inline double gradient_mismatch(const Eigen::VectorXd& analytic, const Eigen::VectorXd& numeric) {
    const double scale = std::max(1e-2, numeric.cwiseAbs().maxCoeff());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < analytic.size(); ++i) {
        const double d = std::abs(analytic[i] - numeric[i]);
        const double denom = std::max(std::abs(numeric[i]), 1e-3 * scale);
        worst = std::max(worst, d / denom);
    }
    return worst;
}

}  // namespace beamforge::oracle
