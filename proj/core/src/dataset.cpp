#include "beamforge/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <system_error>

#include "beamforge/error.hpp"
#include "beamforge/sampling.hpp"

namespace beamforge {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* module_name = "dataset-pipeline";
constexpr std::uint64_t shuffle_stream = 0xD5A7'0001ULL;
constexpr std::array<const char*, 3> partition_files{"train.csv", "validation.csv", "test.csv"};
constexpr std::array<const char*, 4> meta_columns{"u", "system_id", "member_idx", "section_idx"};

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view s, double& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw SchemaError(module_name, where + ": " + what);
}

ordered_json constraints_json(const DesignConstraints& c) {
    return {{"udl_min", c.udl_min},   {"udl_interval", c.udl_interval},
            {"udl_max", c.udl_max},   {"span_min", c.span_min},
            {"span_interval", c.span_interval}, {"span_max", c.span_max},
            {"u_target", c.u_target}, {"epsilon_max", c.epsilon_max}};
}

DesignConstraints constraints_from(const nlohmann::json& j) {
    DesignConstraints c;
    c.udl_min = j.at("udl_min").get<double>();
    c.udl_interval = j.at("udl_interval").get<double>();
    c.udl_max = j.at("udl_max").get<double>();
    c.span_min = j.at("span_min").get<double>();
    c.span_interval = j.at("span_interval").get<double>();
    c.span_max = j.at("span_max").get<double>();
    c.u_target = j.at("u_target").get<double>();
    c.epsilon_max = j.at("epsilon_max").get<double>();
    return c;
}

void check_point(const DataPoint& p, std::size_t k_max, const std::string& where) {
    const std::size_t w = 2 * k_max + 1;
    for (double v : p.inputs) {
        if (!std::isfinite(v) || v < 0.0) schema_error(where, "input values must be finite and >= 0");
    }
    for (std::size_t s = 0; s < w; ++s) {
        if ((p.inputs[s] == 0.0) != (p.inputs[w + s] == 0.0)) {
            schema_error(where, "window slot " + std::to_string(s) +
                                    " pads only one of span and UDL");
        }
    }
    if (p.inputs[k_max] == 0.0) schema_error(where, "design member span is zero");
    for (double t : p.targets) {
        if (!std::isfinite(t) || t <= 0.0) schema_error(where, "targets must be finite and > 0");
    }
}

}  // namespace

std::vector<std::string> input_column_names(std::size_t k_max) {
    std::vector<std::string> names;
    names.reserve(window_input_size(k_max));
    for (const char* prefix : {"L_", "w_"}) {
        for (std::size_t i = k_max; i >= 1; --i) names.push_back(prefix + ("m" + std::to_string(i)));
        names.push_back(std::string(prefix) + "0");
        for (std::size_t i = 1; i <= k_max; ++i) names.push_back(prefix + ("p" + std::to_string(i)));
    }
    return names;
}

const std::array<std::string, target_count>& target_column_names() {
    static const std::array<std::string, target_count> names{"I_cm4", "A_z_cm2", "W_pl_cm3"};
    return names;
}

std::vector<std::string> csv_columns(std::size_t k_max) {
    auto cols = input_column_names(k_max);
    for (const auto& t : target_column_names()) cols.push_back(t);
    for (const char* m : meta_columns) cols.emplace_back(m);
    return cols;
}

std::vector<double> encode_inputs(const BeamSystem& system, std::size_t g, std::size_t k_max) {
    const std::size_t m = system.member_count();
    if (g >= m) {
        throw InvalidArgument(module_name, "member " + std::to_string(g) + " outside system of " +
                                               std::to_string(m));
    }
    const std::size_t w = 2 * k_max + 1;
    std::vector<double> inputs(2 * w, 0.0);
    for (std::size_t s = 0; s < w; ++s) {
        const auto i = static_cast<std::ptrdiff_t>(g) - static_cast<std::ptrdiff_t>(k_max) +
                       static_cast<std::ptrdiff_t>(s);
        if (i < 0 || i >= static_cast<std::ptrdiff_t>(m)) continue;
        inputs[s] = system.spans[static_cast<std::size_t>(i)];
        inputs[w + s] = system.udls[static_cast<std::size_t>(i)];
    }
    return inputs;
}

DataPoint encode_window(const BeamSystem& designed, std::size_t g, std::size_t k_max,
                        const SectionCatalog& catalog) {
    if (!designed.is_designed() || designed.section_indices->size() != designed.member_count()) {
        throw InvalidArgument(module_name, "encode_window needs a designed system");
    }
    DataPoint p;
    p.inputs = encode_inputs(designed, g, k_max);
    const int idx = (*designed.section_indices)[g];
    const SectionProps& s = catalog.props(idx);
    p.targets = {s.second_moment / units::mm4_per_cm4, s.shear_area / units::mm2_per_cm2,
                 s.plastic_modulus / units::mm3_per_cm3};
    p.meta.member_index = g;
    p.meta.section_index = idx;
    return p;
}

Scales compute_scales(const std::vector<const std::vector<DataPoint>*>& parts, std::size_t k_max) {
    Scales s;
    s.inputs.assign(window_input_size(k_max), 0.0);
    s.targets = {0.0, 0.0, 0.0};
    for (const auto* part : parts) {
        for (const auto& p : *part) {
            for (std::size_t c = 0; c < s.inputs.size(); ++c) {
                s.inputs[c] = std::max(s.inputs[c], p.inputs[c]);
            }
            for (std::size_t c = 0; c < target_count; ++c) {
                s.targets[c] = std::max(s.targets[c], p.targets[c]);
            }
        }
    }
    for (double& v : s.inputs) v = v > 0.0 ? v : 1.0;
    for (double& v : s.targets) v = v > 0.0 ? v : 1.0;
    return s;
}

Partition normalize(const std::vector<DataPoint>& points, const Scales& scales) {
    const auto n = static_cast<Eigen::Index>(points.size());
    const auto ni = static_cast<Eigen::Index>(scales.inputs.size());
    Partition part;
    part.x.resize(ni, n);
    part.y.resize(static_cast<Eigen::Index>(target_count), n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const DataPoint& p = points[static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(p.inputs.size()) != ni) {
            throw InvalidArgument(module_name, "data point width does not match the scales");
        }
        for (Eigen::Index c = 0; c < ni; ++c) {
            part.x(c, r) = p.inputs[static_cast<std::size_t>(c)] / scales.inputs[static_cast<std::size_t>(c)];
        }
        for (std::size_t c = 0; c < target_count; ++c) {
            part.y(static_cast<Eigen::Index>(c), r) = p.targets[c] / scales.targets[c];
        }
    }
    return part;
}

Eigen::VectorXd normalize_inputs(const std::vector<double>& inputs, const Scales& scales) {
    if (inputs.size() != scales.inputs.size()) {
        throw InvalidArgument(module_name, "window has " + std::to_string(inputs.size()) +
                                               " values, model expects " +
                                               std::to_string(scales.inputs.size()));
    }
    Eigen::VectorXd x(static_cast<Eigen::Index>(inputs.size()));
    for (std::size_t c = 0; c < inputs.size(); ++c) {
        x(static_cast<Eigen::Index>(c)) = inputs[c] / scales.inputs[c];
    }
    return x;
}

std::array<double, target_count> denormalize_targets(const Eigen::VectorXd& y,
                                                     const Scales& scales) {
    std::array<double, target_count> out{};
    for (std::size_t c = 0; c < target_count; ++c) {
        out[c] = y(static_cast<Eigen::Index>(c)) * scales.targets[c];
    }
    return out;
}

std::array<std::size_t, 3> split_sizes(std::size_t n) {
    const std::size_t train = n * 70 / 100;
    const std::size_t validation = n * 15 / 100;
    return {train, validation, n - train - validation};
}

DatasetBundle assemble_bundle(std::vector<DataPoint> points, std::size_t k_max, std::size_t count,
                              std::uint64_t seed, DatasetManifest manifest) {
    Rng rng(substream_seed(seed, shuffle_stream));
    std::shuffle(points.begin(), points.end(), rng);
    if (count > 0 && points.size() > count) points.resize(count);

    const auto sizes = split_sizes(points.size());
    DatasetBundle b;
    const auto train_end = points.begin() + static_cast<std::ptrdiff_t>(sizes[0]);
    const auto val_end = train_end + static_cast<std::ptrdiff_t>(sizes[1]);
    b.train.assign(points.begin(), train_end);
    b.validation.assign(train_end, val_end);
    b.test.assign(val_end, points.end());
    b.scales = compute_scales({&b.train, &b.validation}, k_max);
    b.manifest = std::move(manifest);
    b.manifest.k_max = k_max;
    b.manifest.seed = seed;
    b.manifest.requested_count = count;
    b.manifest.counts = sizes;
    return b;
}

SystemOutcome generate_system(std::uint64_t system_id, std::size_t m,
                              const DesignConstraints& constraints, const SectionCatalog& catalog,
                              const SteelGrade& grade, const ArrangementSet& set,
                              std::size_t k_max, std::uint64_t seed,
                              const DatasetOptions& options) {
    Rng rng(substream_seed(seed, system_id));
    const BeamSystem brief = random_system(m, constraints, rng);
    SystemOutcome out;
    DesignResult d;
    try {
        d = design(brief, catalog, grade, constraints, set, options.design);
    } catch (const NoCompliantSection&) {
        return out;
    } catch (const ConvergenceError&) {
        return out;
    }
    out.designed = true;
    if (options.post_design_hook) options.post_design_hook(system_id, d);

    if (!d.compliant) return out;
    for (double u : d.report.governing) {
        if (!options.band.contains(u)) return out;
    }
    out.survived = true;
    out.points.reserve(m);
    for (std::size_t g = 0; g < m; ++g) {
        DataPoint p = encode_window(d.system, g, k_max, catalog);
        p.meta.system_id = system_id;
        p.meta.utilisation = d.report.governing[g];
        out.points.push_back(std::move(p));
    }
    return out;
}

DatasetBundle generate(const DesignConstraints& constraints, const SectionCatalog& catalog,
                       const SteelGrade& grade, std::size_t k_max, std::size_t count,
                       std::uint64_t seed, const DatasetOptions& options) {
    if (count < 1) throw InvalidArgument(module_name, "target count must be at least 1");
    if (options.block_size < 1) throw InvalidArgument(module_name, "block size must be >= 1");
    constraints.validate();
    grade.validate();
    const std::size_t m = 2 * k_max + 1;
    const ArrangementSet set = enumerate_arrangements(m, options.mode);

    DatasetManifest manifest;
    manifest.constraints = constraints;
    manifest.band = options.band;
    manifest.arrangement_mode = std::string(to_string(options.mode));

    std::vector<DataPoint> points;
    std::uint64_t next_id = 0;
    bool done = false;
    while (!done) {
        if (next_id >= options.max_systems) {
            std::ostringstream os;
            os << "attempt budget of " << options.max_systems << " systems exhausted with "
               << points.size() << " of " << count << " points; the envelope may be too tight";
            throw InvalidArgument(module_name, os.str());
        }
        const std::size_t n = std::min<std::size_t>(options.block_size, options.max_systems - next_id);
        std::vector<SystemOutcome> outcomes(n);
        parallel_for(n, options.threads, [&](std::size_t i) {
            outcomes[i] = generate_system(next_id + i, m, constraints, catalog, grade, set, k_max,
                                          seed, options);
        });
        for (auto& o : outcomes) {
            ++manifest.systems_drawn;
            if (!o.designed) ++manifest.design_failures;
            if (!o.survived) continue;
            ++manifest.systems_survived;
            for (auto& p : o.points) points.push_back(std::move(p));
            if (points.size() >= count) {
                done = true;
                break;
            }
        }
        next_id += n;
    }
    return assemble_bundle(std::move(points), k_max, count, seed, std::move(manifest));
}

void write_partition_csv(std::ostream& os, const std::vector<DataPoint>& points,
                         std::size_t k_max) {
    const auto cols = csv_columns(k_max);
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
    os << '\n';
    for (const auto& p : points) {
        for (double v : p.inputs) os << format_double(v) << ',';
        for (double t : p.targets) os << format_double(t) << ',';
        os << format_double(p.meta.utilisation) << ',' << p.meta.system_id << ','
           << p.meta.member_index << ',' << p.meta.section_index << '\n';
    }
}

std::vector<DataPoint> read_partition_csv(std::istream& is, std::size_t k_max,
                                          const std::string& label) {
    const auto cols = csv_columns(k_max);
    std::string line;
    if (!std::getline(is, line)) schema_error(label, "missing header");
    line = strip_cr(line);
    const auto header = split_fields(line);
    if (header.size() != cols.size()) {
        schema_error(label, "header has " + std::to_string(header.size()) + " columns, expected " +
                                std::to_string(cols.size()));
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (header[c] != cols[c]) {
            schema_error(label, "column " + std::to_string(c) + " is '" + std::string(header[c]) +
                                    "', expected '" + cols[c] + "'");
        }
    }

    const std::size_t ni = window_input_size(k_max);
    std::vector<DataPoint> points;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        ++row;
        line = strip_cr(line);
        const std::string where = label + " row " + std::to_string(row);
        const auto f = split_fields(line);
        if (f.size() != cols.size()) {
            schema_error(where, "has " + std::to_string(f.size()) + " fields, expected " +
                                    std::to_string(cols.size()));
        }
        DataPoint p;
        p.inputs.resize(ni);
        for (std::size_t c = 0; c < ni; ++c) {
            if (!parse_double(f[c], p.inputs[c])) schema_error(where, "bad number in " + cols[c]);
        }
        for (std::size_t c = 0; c < target_count; ++c) {
            if (!parse_double(f[ni + c], p.targets[c])) {
                schema_error(where, "bad number in " + cols[ni + c]);
            }
        }
        const std::size_t mi = ni + target_count;
        if (!parse_double(f[mi], p.meta.utilisation) || !parse_int(f[mi + 1], p.meta.system_id) ||
            !parse_int(f[mi + 2], p.meta.member_index) ||
            !parse_int(f[mi + 3], p.meta.section_index)) {
            schema_error(where, "bad meta field");
        }
        check_point(p, k_max, where);
        points.push_back(std::move(p));
    }
    return points;
}

void save(const DatasetBundle& b, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::array<const std::vector<DataPoint>*, 3> parts{&b.train, &b.validation, &b.test};
    for (std::size_t i = 0; i < 3; ++i) {
        std::ofstream os(dir / partition_files[i], std::ios::binary);
        if (!os) throw SchemaError(module_name, "cannot write " + (dir / partition_files[i]).string());
        write_partition_csv(os, *parts[i], b.k_max());
    }

    const DatasetManifest& m = b.manifest;
    ordered_json j;
    j["format"] = "beamforge-dataset";
    j["format_version"] = m.format_version;
    j["source"] = m.source;
    j["k_max"] = m.k_max;
    j["seed"] = m.seed;
    j["requested_count"] = m.requested_count;
    j["counts"] = {{"train", b.train.size()},
                   {"validation", b.validation.size()},
                   {"test", b.test.size()}};
    j["constraints"] = constraints_json(m.constraints);
    j["filter_band"] = {m.band.lower, m.band.upper};
    j["arrangement_mode"] = m.arrangement_mode;
    j["systems_drawn"] = m.systems_drawn;
    j["systems_survived"] = m.systems_survived;
    j["design_failures"] = m.design_failures;
    j["yield"] = m.systems_drawn ? static_cast<double>(m.systems_survived) /
                                       static_cast<double>(m.systems_drawn)
                                 : 0.0;
    j["columns"] = csv_columns(m.k_max);
    j["scales"] = {{"inputs", b.scales.inputs}, {"targets", b.scales.targets}};
    std::ofstream os(dir / "manifest.json", std::ios::binary);
    os << j.dump(2) << '\n';
}

DatasetBundle load(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    std::ifstream ms(manifest_path, std::ios::binary);
    if (!ms) throw SchemaError(module_name, "missing " + manifest_path.string());

    DatasetBundle b;
    try {
        const nlohmann::json j = nlohmann::json::parse(ms);
        if (j.at("format").get<std::string>() != "beamforge-dataset") {
            schema_error("manifest.json", "unknown format");
        }
        DatasetManifest& m = b.manifest;
        m.format_version = j.at("format_version").get<int>();
        if (m.format_version != 1) schema_error("manifest.json", "unsupported format_version");
        m.source = j.at("source").get<std::string>();
        m.k_max = j.at("k_max").get<std::size_t>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.requested_count = j.at("requested_count").get<std::size_t>();
        m.counts = {j.at("counts").at("train").get<std::size_t>(),
                    j.at("counts").at("validation").get<std::size_t>(),
                    j.at("counts").at("test").get<std::size_t>()};
        m.constraints = constraints_from(j.at("constraints"));
        m.band = {j.at("filter_band").at(0).get<double>(), j.at("filter_band").at(1).get<double>()};
        m.arrangement_mode = j.at("arrangement_mode").get<std::string>();
        m.systems_drawn = j.at("systems_drawn").get<std::size_t>();
        m.systems_survived = j.at("systems_survived").get<std::size_t>();
        m.design_failures = j.at("design_failures").get<std::size_t>();
        if (j.at("columns").get<std::vector<std::string>>() != csv_columns(m.k_max)) {
            schema_error("manifest.json", "column list does not match k_max");
        }
        b.scales.inputs = j.at("scales").at("inputs").get<std::vector<double>>();
        const auto t = j.at("scales").at("targets").get<std::vector<double>>();
        if (b.scales.inputs.size() != window_input_size(m.k_max) || t.size() != target_count) {
            schema_error("manifest.json", "scale vector sizes do not match k_max");
        }
        std::copy(t.begin(), t.end(), b.scales.targets.begin());
    } catch (const nlohmann::json::exception& e) {
        schema_error("manifest.json", e.what());
    }
    for (double s : b.scales.inputs) {
        if (!(s > 0.0)) schema_error("manifest.json", "scales must be strictly positive");
    }
    for (double s : b.scales.targets) {
        if (!(s > 0.0)) schema_error("manifest.json", "scales must be strictly positive");
    }

    const std::array<std::vector<DataPoint>*, 3> parts{&b.train, &b.validation, &b.test};
    for (std::size_t i = 0; i < 3; ++i) {
        std::ifstream is(dir / partition_files[i], std::ios::binary);
        if (!is) schema_error(partition_files[i], "missing file");
        *parts[i] = read_partition_csv(is, b.k_max(), partition_files[i]);
        if (parts[i]->size() != b.manifest.counts[i]) {
            schema_error(partition_files[i], "found " + std::to_string(parts[i]->size()) +
                                                 " rows, manifest expects " +
                                                 std::to_string(b.manifest.counts[i]));
        }
        if (b.manifest.source == "generated") {
            for (std::size_t r = 0; r < parts[i]->size(); ++r) {
                if (!b.manifest.band.contains((*parts[i])[r].meta.utilisation)) {
                    schema_error(std::string(partition_files[i]) + " row " + std::to_string(r + 1),
                                 "utilisation outside the filter band");
                }
            }
        }
    }
    return b;
}

std::vector<DataPoint> ingest_csv(const std::filesystem::path& path, std::size_t k_max,
                                  const ColumnMapping& mapping) {
    std::ifstream is(path, std::ios::binary);
    const std::string label = path.filename().string();
    if (!is) schema_error(label, "missing file");
    std::string line;
    if (!std::getline(is, line)) schema_error(label, "missing header");
    line = strip_cr(line);
    const auto header = split_fields(line);

    const auto column_of = [&](const std::string& ours, bool required) -> std::ptrdiff_t {
        const auto it = mapping.find(ours);
        const std::string theirs = it == mapping.end() ? ours : it->second;
        const auto pos = std::find(header.begin(), header.end(), theirs);
        if (pos == header.end()) {
            if (required) schema_error(label, "no column '" + theirs + "' for " + ours);
            return -1;
        }
        return pos - header.begin();
    };

    const auto in_names = input_column_names(k_max);
    std::vector<std::ptrdiff_t> in_cols;
    for (const auto& n : in_names) in_cols.push_back(column_of(n, true));
    std::array<std::ptrdiff_t, target_count> t_cols{};
    for (std::size_t c = 0; c < target_count; ++c) {
        t_cols[c] = column_of(target_column_names()[c], true);
    }
    std::array<std::ptrdiff_t, 4> meta_cols{};
    for (std::size_t c = 0; c < 4; ++c) meta_cols[c] = column_of(meta_columns[c], false);

    std::vector<DataPoint> points;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::string where = label + " row " + std::to_string(row);
        const auto f = split_fields(line);
        if (f.size() != header.size()) {
            schema_error(where, "has " + std::to_string(f.size()) + " fields, expected " +
                                    std::to_string(header.size()));
        }
        const auto field = [&](std::ptrdiff_t c) { return f[static_cast<std::size_t>(c)]; };
        DataPoint p;
        p.inputs.resize(in_cols.size());
        for (std::size_t c = 0; c < in_cols.size(); ++c) {
            if (!parse_double(field(in_cols[c]), p.inputs[c])) {
                schema_error(where, "bad number in " + in_names[c]);
            }
        }
        for (std::size_t c = 0; c < target_count; ++c) {
            if (!parse_double(field(t_cols[c]), p.targets[c])) {
                schema_error(where, "bad number in " + target_column_names()[c]);
            }
        }
        p.meta.system_id = row - 1;
        bool ok = true;
        if (meta_cols[0] >= 0) ok &= parse_double(field(meta_cols[0]), p.meta.utilisation);
        if (meta_cols[1] >= 0) ok &= parse_int(field(meta_cols[1]), p.meta.system_id);
        if (meta_cols[2] >= 0) ok &= parse_int(field(meta_cols[2]), p.meta.member_index);
        if (meta_cols[3] >= 0) ok &= parse_int(field(meta_cols[3]), p.meta.section_index);
        if (!ok) schema_error(where, "bad meta field");
        check_point(p, k_max, where);
        points.push_back(std::move(p));
    }
    return points;
}

}  // namespace beamforge
