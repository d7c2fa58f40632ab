#include "settings.hpp"

#include <fstream>
#include <functional>

#include <beamforge/error.hpp>

namespace beamforge::cli {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct Entry {
    KeyInfo info;
    std::function<void(Settings&, const json&)> set;
    std::function<ordered_json(const Settings&)> get;
};

template <typename T>
Entry field(std::string name, std::string type, std::string doc, T Settings::*member) {
    return {{std::move(name), std::move(type), std::move(doc)},
            [member](Settings& s, const json& v) { s.*member = v.get<T>(); },
            [member](const Settings& s) { return ordered_json(s.*member); }};
}

template <typename T, typename Outer>
Entry nested(std::string name, std::string type, std::string doc, Outer Settings::*outer,
             T Outer::*member) {
    return {{std::move(name), std::move(type), std::move(doc)},
            [outer, member](Settings& s, const json& v) { (s.*outer).*member = v.get<T>(); },
            [outer, member](const Settings& s) { return ordered_json((s.*outer).*member); }};
}

std::vector<std::string> names_of(const std::vector<Loss>& v) {
    std::vector<std::string> out;
    for (Loss l : v) out.emplace_back(to_string(l));
    return out;
}

std::pair<Activation, Activation> parse_pair(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        throw ConfigError("activation pair '" + text + "' must look like inner/outer");
    }
    return {activation_from_string(text.substr(0, slash)),
            activation_from_string(text.substr(slash + 1))};
}

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = [] {
        std::vector<Entry> t;
        using C = DesignConstraints;
        t.push_back(nested("constraints.udl_min", "number", "smallest UDL on the grid (kN/m)", &Settings::constraints, &C::udl_min));
        t.push_back(nested("constraints.udl_interval", "number", "UDL grid interval (kN/m)", &Settings::constraints, &C::udl_interval));
        t.push_back(nested("constraints.udl_max", "number", "largest UDL on the grid (kN/m)", &Settings::constraints, &C::udl_max));
        t.push_back(nested("constraints.span_min", "number", "shortest span on the grid (m)", &Settings::constraints, &C::span_min));
        t.push_back(nested("constraints.span_interval", "number", "span grid interval (m)", &Settings::constraints, &C::span_interval));
        t.push_back(nested("constraints.span_max", "number", "longest span on the grid (m)", &Settings::constraints, &C::span_max));
        t.push_back(nested("constraints.u_target", "number", "utilisation the designer sizes to", &Settings::constraints, &C::u_target));
        t.push_back(nested("constraints.epsilon_max", "number", "influence-zone capture tolerance", &Settings::constraints, &C::epsilon_max));

        t.push_back(nested("grade.yield_stress", "number", "yield stress (N/mm^2)", &Settings::grade, &SteelGrade::yield_stress));
        t.push_back(nested("grade.youngs_modulus", "number", "Young's modulus (N/mm^2)", &Settings::grade, &SteelGrade::youngs_modulus));
        t.push_back(nested("grade.shear_modulus", "number", "shear modulus (N/mm^2)", &Settings::grade, &SteelGrade::shear_modulus));

        t.push_back(field("catalog.count", "integer", "number of catalog sections", &Settings::catalog_count));
        t.push_back({{"arrangements.mode", "string", "load arrangements: patterned or exhaustive"},
                     [](Settings& s, const json& v) {
                         s.arrangement_mode = arrangement_mode_from_string(v.get<std::string>());
                     },
                     [](const Settings& s) { return ordered_json(std::string(to_string(s.arrangement_mode))); }});
        t.push_back(nested("checks.mv_interaction", "boolean", "reduce moment resistance under high shear", &Settings::checks, &CheckOptions::mv_interaction));
        t.push_back(field("design.max_sweeps", "integer", "designer sweep cap", &Settings::max_sweeps));
        t.push_back(field("design.max_cycle_period", "integer", "longest index cycle the designer breaks", &Settings::max_cycle_period));

        t.push_back(field("dataset.k_max", "integer", "window half-width; inputs = 4 k_max + 2", &Settings::k_max));
        t.push_back(field("dataset.count", "integer", "data points to generate", &Settings::dataset_count));
        t.push_back(field("dataset.seed", "integer", "generation and split seed", &Settings::dataset_seed));
        t.push_back(nested("dataset.band_lower", "number", "lowest kept utilisation (inclusive)", &Settings::band, &FilterBand::lower));
        t.push_back(nested("dataset.band_upper", "number", "utilisation bound (exclusive)", &Settings::band, &FilterBand::upper));
        t.push_back(field("dataset.max_systems", "integer", "systems drawn before giving up", &Settings::max_systems));
        t.push_back(field("dataset.block_size", "integer", "systems designed per parallel block", &Settings::block_size));

        t.push_back(field("izone.samples", "integer", "random systems for the k_max estimate", &Settings::izone_samples));
        t.push_back(field("izone.m", "integer", "members per probe system", &Settings::izone_m));
        t.push_back(field("izone.seed", "integer", "probe seed", &Settings::izone_seed));

        using N = NetworkConfig;
        t.push_back(nested("net.hidden", "integer array", "hidden layer heights", &Settings::net, &N::hidden));
        t.push_back({{"net.inner", "string", "hidden activation: relu, sigmoid or tanh"},
                     [](Settings& s, const json& v) { s.net.inner = activation_from_string(v.get<std::string>()); },
                     [](const Settings& s) { return ordered_json(std::string(to_string(s.net.inner))); }});
        t.push_back({{"net.outer", "string", "output activation: relu, sigmoid or exp"},
                     [](Settings& s, const json& v) { s.net.outer = activation_from_string(v.get<std::string>()); },
                     [](const Settings& s) { return ordered_json(std::string(to_string(s.net.outer))); }});
        t.push_back({{"net.loss", "string", "training loss: mae, mse, mape or mspe"},
                     [](Settings& s, const json& v) { s.net.loss = loss_from_string(v.get<std::string>()); },
                     [](const Settings& s) { return ordered_json(std::string(to_string(s.net.loss))); }});
        t.push_back(nested("net.init_sigma", "number", "std of the Gaussian initialiser", &Settings::net, &N::init_sigma));
        t.push_back(nested("net.seed", "integer", "initialiser and shuffle seed", &Settings::net, &N::seed));
        t.push_back(nested("net.loss_epsilon", "number", "denominator guard of the percentage losses", &Settings::net, &N::loss_epsilon));

        t.push_back(nested("train.alpha", "number", "Nadam learning rate", &Settings::net, &N::learning_rate));
        t.push_back(nested("train.batch_size", "integer", "mini-batch size", &Settings::net, &N::batch_size));
        t.push_back(nested("train.epochs", "integer", "training epochs", &Settings::net, &N::epochs));
        t.push_back(nested("train.beta1", "number", "Nadam first-moment decay", &Settings::net, &N::beta1));
        t.push_back(nested("train.beta2", "number", "Nadam second-moment decay", &Settings::net, &N::beta2));
        t.push_back(nested("train.nadam_epsilon", "number", "Nadam denominator guard", &Settings::net, &N::nadam_epsilon));
        t.push_back(field("train.metrics_every", "integer", "epochs between full metric passes", &Settings::metrics_every));

        t.push_back({{"study.losses", "string array", "losses of the grid study"},
                     [](Settings& s, const json& v) {
                         s.study.losses.clear();
                         for (const auto& n : v.get<std::vector<std::string>>()) s.study.losses.push_back(loss_from_string(n));
                     },
                     [](const Settings& s) { return ordered_json(names_of(s.study.losses)); }});
        t.push_back({{"study.activations", "string array", "inner/outer pairs of the grid study"},
                     [](Settings& s, const json& v) {
                         s.study.activations.clear();
                         for (const auto& n : v.get<std::vector<std::string>>()) s.study.activations.push_back(parse_pair(n));
                     },
                     [](const Settings& s) {
                         std::vector<std::string> out;
                         for (const auto& [a, b] : s.study.activations) {
                             out.push_back(std::string(to_string(a)) + "/" + std::string(to_string(b)));
                         }
                         return ordered_json(out);
                     }});
        t.push_back(nested("study.heights", "integer array", "heights of the two-layer height study", &Settings::study, &GridSpec::heights));
        t.push_back(nested("study.depths", "integer array", "layer counts of the depth study", &Settings::study, &GridSpec::depths));
        t.push_back(nested("study.depth_height", "integer", "layer height of the depth study", &Settings::study, &GridSpec::depth_height));
        t.push_back(nested("study.dataset_sizes", "integer array", "training rows of the dataset-size study", &Settings::study, &GridSpec::dataset_sizes));

        t.push_back(field("generalize.m_min", "integer", "smallest system size", &Settings::generalize_m_min));
        t.push_back(field("generalize.m_max", "integer", "largest system size", &Settings::generalize_m_max));
        t.push_back(field("generalize.points_per_m", "integer", "fresh points per system size", &Settings::generalize_points));
        t.push_back(field("generalize.seed", "integer", "seed of the fresh systems", &Settings::generalize_seed));
        t.push_back(field("generalize.max_systems_per_m", "integer", "systems drawn per size before flagging", &Settings::generalize_max_systems));

        t.push_back(field("disperse.partition", "string", "partition analysed: train, validation or test", &Settings::disperse_partition));
        t.push_back(field("robust.seeds", "integer array", "initialiser seeds of the robustness study", &Settings::robust_seeds));
        t.push_back(field("threads", "integer", "worker threads (BEAMFORGE_THREADS and --threads override)", &Settings::threads));
        return t;
    }();
    return table;
}

}  // namespace

DesignOptions Settings::design_options() const {
    DesignOptions d;
    d.max_sweeps = max_sweeps;
    d.max_cycle_period = max_cycle_period;
    d.checks = checks;
    return d;
}

DatasetOptions Settings::dataset_options() const {
    DatasetOptions o;
    o.mode = arrangement_mode;
    o.design = design_options();
    o.band = band;
    o.threads = threads;
    o.block_size = block_size;
    o.max_systems = max_systems;
    return o;
}

const std::vector<KeyInfo>& config_keys() {
    static const std::vector<KeyInfo> keys = [] {
        std::vector<KeyInfo> k;
        for (const auto& e : entries()) k.push_back(e.info);
        return k;
    }();
    return keys;
}

void apply_setting(Settings& s, const std::string& key, const json& value) {
    for (const auto& e : entries()) {
        if (e.info.name != key) continue;
        try {
            e.set(s, value);
        } catch (const json::exception&) {
            throw ConfigError("config key '" + key + "' expects " + e.info.type);
        } catch (const Error& err) {
            throw ConfigError("config key '" + key + "': " + err.what());
        }
        return;
    }
    throw ConfigError("unknown config key '" + key + "'");
}

void apply_config_file(Settings& s, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file " + path + " must hold a JSON object");
    for (const auto& [key, value] : j.items()) apply_setting(s, key, value);
}

ordered_json settings_json(const Settings& s) {
    ordered_json j;
    for (const auto& e : entries()) j[e.info.name] = e.get(s);
    return j;
}

}  // namespace beamforge::cli
