#include "beamforge/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <iomanip>
#include <ostream>

#include "beamforge/error.hpp"
#include "beamforge/sampling.hpp"

namespace beamforge {

namespace {

constexpr const char* module_name = "evaluation";

std::string pair_key(Activation a, Activation b) {
    return std::string(to_string(a)) + "/" + std::string(to_string(b));
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double mu = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size()));
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

void write_report_fields(std::ostream& os, const MetricsReport& r) {
    os << r.mape;
    for (double a : r.accuracy) os << ',' << a;
}

}  // namespace

// ---------------------------------------------------------------------------
// grid study

std::string_view to_string(GridAxis axis) {
    switch (axis) {
        case GridAxis::loss_activation: return "grid";
        case GridAxis::heights: return "height";
        case GridAxis::depths: return "depth";
        case GridAxis::dataset_sizes: return "datasize";
    }
    return "?";
}

GridAxis grid_axis_from_string(std::string_view name) {
    for (auto a : {GridAxis::loss_activation, GridAxis::heights, GridAxis::depths,
                   GridAxis::dataset_sizes}) {
        if (name == to_string(a)) return a;
    }
    throw InvalidArgument(module_name, "unknown study axis '" + std::string(name) + "'");
}

std::vector<NetworkConfig> grid_configs(const NetworkConfig& base, const GridSpec& spec,
                                        std::vector<std::string>* keys,
                                        std::vector<std::size_t>* rows) {
    std::vector<NetworkConfig> out;
    if (keys) keys->clear();
    if (rows) rows->clear();
    const auto add = [&](NetworkConfig c, std::string key, std::size_t n) {
        out.push_back(std::move(c));
        if (keys) keys->push_back(std::move(key));
        if (rows) rows->push_back(n);
    };
    switch (spec.axis) {
        case GridAxis::loss_activation:
            for (Loss l : spec.losses) {
                for (const auto& [in, outer] : spec.activations) {
                    NetworkConfig c = base;
                    c.loss = l;
                    c.inner = in;
                    c.outer = outer;
                    add(c, std::string(to_string(l)) + ":" + pair_key(in, outer), 0);
                }
            }
            break;
        case GridAxis::heights:
            for (std::size_t h : spec.heights) {
                NetworkConfig c = base;
                c.hidden = {h, h};
                add(c, "H=" + std::to_string(h), 0);
            }
            break;
        case GridAxis::depths:
            for (std::size_t d : spec.depths) {
                NetworkConfig c = base;
                c.hidden.assign(d, spec.depth_height);
                add(c, "D=" + std::to_string(d), 0);
            }
            break;
        case GridAxis::dataset_sizes:
            for (std::size_t n : spec.dataset_sizes) {
                if (n < 1) throw InvalidArgument(module_name, "dataset sizes must be positive");
                add(base, "N=" + std::to_string(n), n);
            }
            break;
    }
    if (out.empty()) throw InvalidArgument(module_name, "study axis has no values");
    return out;
}

std::vector<GridCell> grid_study(const NetworkConfig& base, const GridSpec& spec,
                                 const DatasetBundle& data, std::size_t threads) {
    std::vector<std::string> keys;
    std::vector<std::size_t> rows;
    const auto configs = grid_configs(base, spec, &keys, &rows);
    const Partition val = normalize(data.validation, data.scales);
    const Partition full_train = normalize(data.train, data.scales);

    std::vector<GridCell> cells(configs.size());
    parallel_for(configs.size(), threads, [&](std::size_t i) {
        GridCell& cell = cells[i];
        cell.key = keys[i];
        cell.config = configs[i];
        try {
            Partition tp = full_train;
            if (rows[i] > 0 && rows[i] < full_train.rows()) {
                const auto n = static_cast<Eigen::Index>(rows[i]);
                tp.x = full_train.x.leftCols(n);
                tp.y = full_train.y.leftCols(n);
            }
            cell.train_rows = tp.rows();
            Mlp model(cell.config);
            TrainOptions opts;
            opts.metrics_every = cell.config.epochs;
            (void)train(model, tp, val, data.scales, opts);
            cell.train = evaluate(model, tp, data.scales);
            if (val.rows() > 0) cell.validation = evaluate(model, val, data.scales);
            cell.ok = true;
        } catch (const Error& e) {
            cell.ok = false;
            cell.error = e.what();
        }
    });
    return cells;
}

void write_grid_csv(std::ostream& os, const std::vector<GridCell>& cells) {
    os << std::setprecision(12);
    os << "cell,train_rows,ok,train_mape,val_mape,val_accuracy_min,val_accuracy_max,error\n";
    for (const auto& c : cells) {
        os << c.key << ',' << c.train_rows << ',' << (c.ok ? 1 : 0) << ',';
        if (c.ok) {
            os << c.train.mape << ',' << c.validation.mape << ',' << c.validation.accuracy.front()
               << ',' << c.validation.accuracy.back() << ',';
        } else {
            std::string msg = c.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            os << ",,,," << msg;
        }
        os << '\n';
    }
}

// ---------------------------------------------------------------------------
// generalisation

std::vector<GeneralisationRow> generalisability_sweep(
    const Mlp& model, const Scales& scales, const DesignConstraints& constraints,
    const SectionCatalog& catalog, const SteelGrade& grade, std::size_t k_max,
    std::pair<std::size_t, std::size_t> m_range, std::size_t points_per_m, std::uint64_t seed,
    const GeneralisationOptions& options) {
    if (m_range.first < 1 || m_range.first > m_range.second) {
        throw InvalidArgument(module_name, "invalid system size range");
    }
    if (points_per_m < 1) throw InvalidArgument(module_name, "points_per_m must be positive");
    if (window_input_size(k_max) != model.config().input_size) {
        throw InvalidArgument(module_name, "k_max does not match the model input size");
    }
    const DatasetOptions& dopt = options.dataset;
    const std::size_t block = std::max<std::size_t>(dopt.block_size, 1);

    std::vector<GeneralisationRow> rows;
    for (std::size_t m = m_range.first; m <= m_range.second; ++m) {
        const ArrangementSet set = enumerate_arrangements(m, dopt.mode);
        const std::uint64_t m_seed = substream_seed(seed, m);
        GeneralisationRow row;
        row.m = m;
        std::vector<DataPoint> points;
        std::uint64_t next = 0;
        while (points.size() < points_per_m && next < options.max_systems_per_m) {
            const std::size_t n = std::min<std::size_t>(block, options.max_systems_per_m - next);
            std::vector<SystemOutcome> outcomes(n);
            parallel_for(n, dopt.threads, [&](std::size_t i) {
                outcomes[i] = generate_system(next + i, m, constraints, catalog, grade, set, k_max,
                                              m_seed, dopt);
            });
            for (auto& o : outcomes) {
                ++row.systems_drawn;
                if (!o.survived) continue;
                ++row.systems_survived;
                for (auto& p : o.points) points.push_back(std::move(p));
                if (points.size() >= points_per_m) break;
            }
            next += n;
        }
        if (points.size() > points_per_m) points.resize(points_per_m);
        row.points = points.size();
        row.flagged = points.size() < points_per_m;
        if (!points.empty()) row.metrics = evaluate(model, normalize(points, scales), scales);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_generalisation_csv(std::ostream& os, const std::vector<GeneralisationRow>& rows) {
    os << std::setprecision(12);
    os << "m,points,systems_drawn,systems_survived,flagged,mape,acc_min,acc_p0.5,acc_p2.5,"
          "acc_p50,acc_p97.5,acc_p99.5,acc_max\n";
    for (const auto& r : rows) {
        os << r.m << ',' << r.points << ',' << r.systems_drawn << ',' << r.systems_survived << ','
           << (r.flagged ? 1 : 0) << ',';
        if (r.metrics) {
            write_report_fields(os, *r.metrics);
        } else {
            os << ",,,,,,,";
        }
        os << '\n';
    }
}

// ---------------------------------------------------------------------------
// dispersion

std::string_view to_string(Descriptor d) {
    switch (d) {
        case Descriptor::span: return "L0";
        case Descriptor::udl: return "w0";
        case Descriptor::second_moment: return "I";
        case Descriptor::shear_area: return "A_z";
        case Descriptor::plastic_modulus: return "W_pl";
        case Descriptor::total_load: return "w0L0";
    }
    return "?";
}

double descriptor_value(const DataPoint& p, std::size_t k_max, Descriptor d) {
    const double span = p.inputs[k_max];
    const double udl = p.inputs[2 * k_max + 1 + k_max];
    switch (d) {
        case Descriptor::span: return span;
        case Descriptor::udl: return udl;
        case Descriptor::second_moment: return p.targets[0];
        case Descriptor::shear_area: return p.targets[1];
        case Descriptor::plastic_modulus: return p.targets[2];
        case Descriptor::total_load: return span * udl;
    }
    return 0.0;
}

std::vector<std::array<std::size_t, 2>> decile_ranges(std::size_t rows) {
    if (rows < decile_count) {
        throw InvalidArgument(module_name, "dispersion needs at least " +
                                               std::to_string(decile_count) + " rows, got " +
                                               std::to_string(rows));
    }
    std::vector<std::array<std::size_t, 2>> out;
    for (std::size_t d = 0; d < decile_count; ++d) {
        out.push_back({d * rows / decile_count, (d + 1) * rows / decile_count});
    }
    return out;
}

DispersionResult dispersion_from_predictions(
    const std::vector<DataPoint>& points, const std::vector<std::array<double, target_count>>& pred,
    std::size_t k_max, const DesignConstraints& constraints, double eps, const Scales& scales,
    const std::vector<Descriptor>& descriptors) {
    if (pred.size() != points.size()) {
        throw InvalidArgument(module_name, "prediction count does not match the partition");
    }
    const auto ranges = decile_ranges(points.size());
    const std::size_t n = points.size();

    std::vector<double> accuracy(n);
    std::vector<double> row_mape(n);
    for (std::size_t r = 0; r < n; ++r) {
        double acc = 0.0;
        double err = 0.0;
        for (std::size_t c = 0; c < target_count; ++c) {
            const double t = points[r].targets[c];
            if (t == 0.0) throw InvalidArgument(module_name, "zero target at row " + std::to_string(r));
            acc += pred[r][c] / t;
            const double tn = t / scales.targets[c];
            err += std::abs(pred[r][c] / scales.targets[c] - tn) / (tn + eps);
        }
        accuracy[r] = acc / static_cast<double>(target_count);
        row_mape[r] = err / static_cast<double>(target_count);
    }

    DispersionResult out;
    for (Descriptor d : descriptors) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::vector<double> key(n);
        for (std::size_t r = 0; r < n; ++r) key[r] = descriptor_value(points[r], k_max, d);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
        DecileRow row;
        row.descriptor = d;
        std::vector<double> stds;
        for (std::size_t q = 0; q < decile_count; ++q) {
            std::vector<double> acc;
            for (std::size_t i = ranges[q][0]; i < ranges[q][1]; ++i) acc.push_back(accuracy[order[i]]);
            row.population[q] = acc.size();
            row.upper_bound[q] = key[order[ranges[q][1] - 1]];
            row.accuracy_std[q] = population_std(acc);
            stds.push_back(row.accuracy_std[q]);
        }
        row.sigma_of_sigmas = population_std(stds);
        out.deciles.push_back(row);
    }

    const std::size_t nu = constraints.udl_grid_size();
    const std::size_t ns = constraints.span_grid_size();
    out.heatmap.resize(nu * ns);
    for (std::size_t iu = 0; iu < nu; ++iu) {
        for (std::size_t is = 0; is < ns; ++is) {
            HeatmapCell& cell = out.heatmap[iu * ns + is];
            cell.udl = constraints.udl_at(iu);
            cell.span = constraints.span_at(is);
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        const auto iu = constraints.udl_index(descriptor_value(points[r], k_max, Descriptor::udl));
        const auto is = constraints.span_index(descriptor_value(points[r], k_max, Descriptor::span));
        if (!iu || !is) continue;
        HeatmapCell& cell = out.heatmap[*iu * ns + *is];
        cell.mean_mape += row_mape[r];
        cell.max_mape = cell.count ? std::max(cell.max_mape, row_mape[r]) : row_mape[r];
        ++cell.count;
    }
    for (auto& cell : out.heatmap) {
        if (cell.count) cell.mean_mape /= static_cast<double>(cell.count);
    }
    return out;
}

DispersionResult dispersion_analysis(const Mlp& model, const Scales& scales,
                                     const std::vector<DataPoint>& points, std::size_t k_max,
                                     const DesignConstraints& constraints) {
    (void)decile_ranges(points.size());
    const Partition part = normalize(points, scales);
    const Eigen::MatrixXd y = model.forward(part.x);
    std::vector<std::array<double, target_count>> pred(points.size());
    for (std::size_t r = 0; r < points.size(); ++r) {
        pred[r] = denormalize_targets(y.col(static_cast<Eigen::Index>(r)), scales);
    }
    return dispersion_from_predictions(points, pred, k_max, constraints,
                                       model.config().loss_epsilon, scales);
}

void write_deciles_csv(std::ostream& os, const std::vector<DecileRow>& rows) {
    os << std::setprecision(12);
    os << "descriptor,decile,upper_bound,population,accuracy_std,sigma_of_sigmas\n";
    for (const auto& r : rows) {
        for (std::size_t q = 0; q < decile_count; ++q) {
            os << to_string(r.descriptor) << ",D" << q << ',' << r.upper_bound[q] << ','
               << r.population[q] << ',' << r.accuracy_std[q] << ',' << r.sigma_of_sigmas << '\n';
        }
    }
}

void write_heatmap_csv(std::ostream& os, const std::vector<HeatmapCell>& cells) {
    os << std::setprecision(12);
    os << "udl_kn_m,span_m,count,mean_mape,max_mape\n";
    for (const auto& c : cells) {
        os << c.udl << ',' << c.span << ',' << c.count << ',';
        if (c.count) os << c.mean_mape << ',' << c.max_mape;
        else os << ',';
        os << '\n';
    }
}

// ---------------------------------------------------------------------------
// robustness

std::vector<RobustnessRow> summarise_robustness(
    const std::vector<std::array<MetricsReport, 3>>& per_seed) {
    static const std::array<const char*, 3> names{"train", "validation", "test"};
    std::vector<RobustnessRow> rows;
    for (std::size_t p = 0; p < 3; ++p) {
        RobustnessRow row;
        row.partition = names[p];
        std::vector<double> v;
        for (const auto& s : per_seed) v.push_back(s[p].mape);
        row.mape_mean = mean_of(v);
        row.mape_std = sample_std(v);
        for (std::size_t q = 0; q < percentile_levels.size(); ++q) {
            v.clear();
            for (const auto& s : per_seed) v.push_back(s[p].accuracy[q]);
            row.accuracy_mean[q] = mean_of(v);
            row.accuracy_std[q] = sample_std(v);
        }
        rows.push_back(row);
    }
    return rows;
}

RobustnessResult robustness_study(const NetworkConfig& config, const DatasetBundle& data,
                                  const std::vector<std::uint64_t>& seeds, std::size_t threads) {
    if (seeds.size() < 2) throw InvalidArgument(module_name, "robustness study needs >= 2 seeds");
    if (data.train.empty() || data.validation.empty() || data.test.empty()) {
        throw InvalidArgument(module_name, "robustness study needs all three partitions");
    }
    const Partition tp = normalize(data.train, data.scales);
    const Partition vp = normalize(data.validation, data.scales);
    const Partition sp = normalize(data.test, data.scales);

    RobustnessResult r;
    r.seeds = seeds;
    r.per_seed.resize(seeds.size());
    parallel_for(seeds.size(), threads, [&](std::size_t i) {
        NetworkConfig c = config;
        c.seed = seeds[i];
        Mlp model(c);
        TrainOptions opts;
        opts.metrics_every = c.epochs;
        (void)train(model, tp, vp, data.scales, opts);
        r.per_seed[i] = {evaluate(model, tp, data.scales), evaluate(model, vp, data.scales),
                         evaluate(model, sp, data.scales)};
    });
    r.rows = summarise_robustness(r.per_seed);
    return r;
}

void write_robustness_csv(std::ostream& os, const std::vector<RobustnessRow>& rows) {
    os << std::setprecision(12);
    os << "partition,statistic,mean,std\n";
    static const std::array<const char*, 7> names{"acc_min",   "acc_p0.5",  "acc_p2.5", "acc_p50",
                                                  "acc_p97.5", "acc_p99.5", "acc_max"};
    for (const auto& r : rows) {
        os << r.partition << ",mape," << r.mape_mean << ',' << r.mape_std << '\n';
        for (std::size_t q = 0; q < names.size(); ++q) {
            os << r.partition << ',' << names[q] << ',' << r.accuracy_mean[q] << ','
               << r.accuracy_std[q] << '\n';
        }
    }
}

}  // namespace beamforge
