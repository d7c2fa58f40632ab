#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <beamforge/error.hpp>
#include <beamforge/evaluation.hpp>

#include "settings.hpp"

#ifndef BEAMFORGE_VERSION
#define BEAMFORGE_VERSION "unknown"
#endif

namespace beamforge::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct Context {
    Settings settings;
    std::vector<std::string> argv;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::ostream* out = nullptr;
};

[[noreturn]] void fail(const std::string& what) { throw beamforge::Error("cli", what); }

void ensure_absent(const fs::path& p) {
    if (fs::exists(p)) fail("output " + p.string() + " already exists; outputs are never overwritten");
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) fail("cannot write " + p.string());
    return os;
}

void write_manifest(const Context& ctx, const fs::path& path, const std::string& command,
                    const std::vector<fs::path>& outputs, ordered_json extra = ordered_json::object()) {
    ordered_json j;
    j["command"] = command;
    j["argv"] = ctx.argv;
    j["version"] = BEAMFORGE_VERSION;
    j["compiler"] = __VERSION__;
    j["threads"] = ctx.settings.threads;
    j["settings"] = settings_json(ctx.settings);
    std::vector<std::string> outs;
    for (const auto& o : outputs) outs.push_back(o.string());
    j["outputs"] = outs;
    for (auto& [k, v] : extra.items()) j[k] = v;
    j["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
    auto os = open_out(path);
    os << j.dump(2) << '\n';
}

fs::path sibling(const fs::path& file, const std::string& suffix) {
    return fs::path(file.string() + suffix);
}

std::size_t k_max_of(const Mlp& model) {
    const std::size_t n = model.config().input_size;
    if (n < 2 || (n - 2) % 4 != 0) fail("model input size " + std::to_string(n) + " is not 4 k + 2");
    return (n - 2) / 4;
}

const std::vector<DataPoint>& partition_of(const DatasetBundle& b, const std::string& name) {
    if (name == "train") return b.train;
    if (name == "validation") return b.validation;
    if (name == "test") return b.test;
    throw ConfigError("partition must be train, validation or test, got '" + name + "'");
}

NetworkConfig net_for(const Settings& s, const DatasetBundle& data) {
    NetworkConfig c = s.net;
    c.input_size = window_input_size(data.k_max());
    c.output_size = target_count;
    return c;
}

void write_report_row(std::ostream& os, const std::string& label, const MetricsReport& r) {
    os << label << ',' << r.rows << ',' << r.mape;
    for (double a : r.accuracy) os << ',' << a;
    os << '\n';
}

constexpr const char* report_header =
    "partition,rows,mape,acc_min,acc_p0.5,acc_p2.5,acc_p50,acc_p97.5,acc_p99.5,acc_max\n";

// ---------------------------------------------------------------------------

void cmd_sections_export(Context& ctx, const fs::path& out) {
    ensure_absent(out);
    const auto catalog = SectionCatalog::generate(ctx.settings.catalog_count);
    {
        auto os = open_out(out);
        catalog.write_csv(os);
    }
    write_manifest(ctx, sibling(out, ".run.json"), "sections export", {out});
}

void cmd_izone(Context& ctx, const fs::path& out) {
    ensure_absent(out);
    const Settings& s = ctx.settings;
    const auto catalog = SectionCatalog::generate(s.catalog_count);
    InfluenceZoneOptions opts;
    opts.mode = s.arrangement_mode;
    opts.design = s.design_options();
    opts.threads = s.threads;
    const auto r = estimate_k_max(s.constraints, catalog, s.grade, s.izone_samples, s.izone_m,
                                  s.constraints.epsilon_max, s.izone_seed, opts);
    fs::create_directories(out);
    {
        auto os = open_out(out / "izone.csv");
        os << "system_id,member_index,k\n";
        for (const auto& e : r.entries) os << e.system_id << ',' << e.member << ',' << e.k << '\n';
    }
    ordered_json summary;
    summary["m"] = r.m;
    summary["epsilon_max"] = r.epsilon_max;
    summary["systems_requested"] = r.systems_requested;
    summary["systems_used"] = r.systems_used;
    summary["design_failures"] = r.design_failures;
    summary["members"] = r.per_member_k.size();
    summary["mean_k"] = r.k_mean;
    summary["max_k"] = r.k_max;
    summary["histogram"] = r.histogram;
    {
        auto os = open_out(out / "summary.json");
        os << summary.dump(2) << '\n';
    }
    write_manifest(ctx, out / "run.json", "izone", {out / "izone.csv", out / "summary.json"},
                   {{"seed", s.izone_seed}});
    *ctx.out << "mean k " << r.k_mean << ", max k " << r.k_max << " over " << r.per_member_k.size()
             << " members\n";
}

void cmd_dataset_generate(Context& ctx, const fs::path& out) {
    ensure_absent(out);
    const Settings& s = ctx.settings;
    const auto catalog = SectionCatalog::generate(s.catalog_count);
    const auto bundle = generate(s.constraints, catalog, s.grade, s.k_max, s.dataset_count,
                                 s.dataset_seed, s.dataset_options());
    save(bundle, out);
    write_manifest(ctx, out / "run.json", "dataset generate",
                   {out / "train.csv", out / "validation.csv", out / "test.csv", out / "manifest.json"},
                   {{"seed", s.dataset_seed}});
    *ctx.out << "wrote " << bundle.size() << " points from " << bundle.manifest.systems_survived
             << " of " << bundle.manifest.systems_drawn << " systems\n";
}

void cmd_train(Context& ctx, const fs::path& data, const fs::path& out) {
    ensure_absent(out);
    const fs::path history_path = sibling(out, ".history.csv");
    ensure_absent(history_path);
    const auto bundle = load(data);
    Mlp model(net_for(ctx.settings, bundle));
    TrainOptions opts;
    opts.metrics_every = ctx.settings.metrics_every;
    const auto result = train(model, bundle, opts);
    save_checkpoint(out, model, bundle.scales);
    {
        auto os = open_out(history_path);
        os << std::setprecision(12);
        os << "epoch,train_loss,train_mape,val_mape,val_acc_min,val_acc_p50,val_acc_max\n";
        for (const auto& r : result.history) {
            os << r.epoch << ',' << r.train_loss << ',';
            if (r.train.rows) {
                os << r.train.mape << ',' << r.validation.mape << ',' << r.validation.accuracy[0]
                   << ',' << r.validation.accuracy[3] << ',' << r.validation.accuracy[6];
            } else {
                os << ",,,,";
            }
            os << '\n';
        }
    }
    write_manifest(ctx, sibling(out, ".run.json"), "train", {out, history_path},
                   {{"data", data.string()}, {"seed", model.config().seed}});
    const auto& last = result.history.back();
    *ctx.out << "epoch " << last.epoch << ": train MAPE " << last.train.mape << ", validation MAPE "
             << last.validation.mape << '\n';
}

void cmd_evaluate(Context& ctx, const fs::path& model_path, const fs::path& data, const fs::path& out) {
    ensure_absent(out);
    const auto ck = load_checkpoint(model_path);
    const auto bundle = load(data);
    fs::create_directories(out);
    {
        auto os = open_out(out / "metrics.csv");
        os << std::setprecision(12) << report_header;
        for (const auto* name : {"train", "validation", "test"}) {
            const auto& part = partition_of(bundle, name);
            if (part.empty()) continue;
            write_report_row(os, name, evaluate(ck.model, normalize(part, ck.scales), ck.scales));
        }
    }
    write_manifest(ctx, out / "run.json", "evaluate", {out / "metrics.csv"},
                   {{"model", model_path.string()}, {"data", data.string()}});
}

void cmd_study(Context& ctx, GridAxis axis, const fs::path& data, const fs::path& out) {
    ensure_absent(out);
    const auto bundle = load(data);
    GridSpec spec = ctx.settings.study;
    spec.axis = axis;
    const auto cells = grid_study(net_for(ctx.settings, bundle), spec, bundle, ctx.settings.threads);
    fs::create_directories(out);
    {
        auto os = open_out(out / "study.csv");
        write_grid_csv(os, cells);
    }
    write_manifest(ctx, out / "run.json", "study " + std::string(to_string(axis)),
                   {out / "study.csv"}, {{"data", data.string()}});
}

void cmd_generalize(Context& ctx, const fs::path& model_path, const fs::path& out) {
    ensure_absent(out);
    const Settings& s = ctx.settings;
    const auto ck = load_checkpoint(model_path);
    const auto catalog = SectionCatalog::generate(s.catalog_count);
    GeneralisationOptions opts;
    opts.dataset = s.dataset_options();
    opts.max_systems_per_m = s.generalize_max_systems;
    const auto rows = generalisability_sweep(ck.model, ck.scales, s.constraints, catalog, s.grade,
                                             k_max_of(ck.model),
                                             {s.generalize_m_min, s.generalize_m_max},
                                             s.generalize_points, s.generalize_seed, opts);
    fs::create_directories(out);
    {
        auto os = open_out(out / "generalisation.csv");
        write_generalisation_csv(os, rows);
    }
    write_manifest(ctx, out / "run.json", "generalize", {out / "generalisation.csv"},
                   {{"model", model_path.string()}, {"seed", s.generalize_seed}});
}

void cmd_disperse(Context& ctx, const fs::path& model_path, const fs::path& data, const fs::path& out) {
    ensure_absent(out);
    const auto ck = load_checkpoint(model_path);
    const auto bundle = load(data);
    const auto& part = partition_of(bundle, ctx.settings.disperse_partition);
    const auto r = dispersion_analysis(ck.model, ck.scales, part, bundle.k_max(), ctx.settings.constraints);
    fs::create_directories(out);
    {
        auto os = open_out(out / "deciles.csv");
        write_deciles_csv(os, r.deciles);
    }
    {
        auto os = open_out(out / "heatmap.csv");
        write_heatmap_csv(os, r.heatmap);
    }
    write_manifest(ctx, out / "run.json", "disperse", {out / "deciles.csv", out / "heatmap.csv"},
                   {{"model", model_path.string()}, {"data", data.string()}});
}

void cmd_robust(Context& ctx, const fs::path& data, const fs::path& out) {
    ensure_absent(out);
    const auto bundle = load(data);
    const auto r = robustness_study(net_for(ctx.settings, bundle), bundle, ctx.settings.robust_seeds,
                                    ctx.settings.threads);
    fs::create_directories(out);
    {
        auto os = open_out(out / "robustness.csv");
        write_robustness_csv(os, r.rows);
    }
    {
        auto os = open_out(out / "per_seed.csv");
        os << std::setprecision(12) << "seed," << report_header;
        static const std::array<const char*, 3> names{"train", "validation", "test"};
        for (std::size_t i = 0; i < r.seeds.size(); ++i) {
            for (std::size_t p = 0; p < 3; ++p) {
                os << r.seeds[i] << ',';
                write_report_row(os, names[p], r.per_seed[i][p]);
            }
        }
    }
    write_manifest(ctx, out / "run.json", "robust", {out / "robustness.csv", out / "per_seed.csv"},
                   {{"data", data.string()}});
}

std::vector<double> parse_window(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("window value '" + item + "' is not a number");
        }
    }
    return v;
}

void cmd_predict(Context& ctx, const fs::path& model_path, const std::string& window) {
    const auto ck = load_checkpoint(model_path);
    const auto p = predict(ck.model, ck.scales, parse_window(window));
    *ctx.out << std::setprecision(12) << "I_cm4,A_z_cm2,W_pl_cm3\n"
             << p[0] << ',' << p[1] << ',' << p[2] << '\n';
}

std::size_t threads_from_env() {
    const char* env = std::getenv("BEAMFORGE_THREADS");
    if (!env || !*env) return 0;
    try {
        const long n = std::stol(env);
        if (n < 1) throw std::out_of_range(env);
        return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        throw ConfigError(std::string("BEAMFORGE_THREADS must be a positive integer, got '") + env + "'");
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Continuous-beam design, dataset generation and surrogate training", "beamforge"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", BEAMFORGE_VERSION);

    std::string config_path;
    std::optional<std::size_t> threads;
    app.add_option("--config", config_path, "flat-key JSON config file")->check(CLI::ExistingFile);
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    // flag values; unset optionals leave config/default values alone
    std::string out_path, data_path, model_path, window;
    std::optional<std::size_t> count, kmax, samples, m_probe, epochs, m_min, m_max, points;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> partition;
    std::vector<std::uint64_t> seeds;

    auto* sections = app.add_subcommand("sections", "section catalog");
    sections->require_subcommand(1);
    auto* sections_export = sections->add_subcommand("export", "write the catalog as CSV");
    sections_export->add_option("--out", out_path, "CSV file")->required();
    sections_export->add_option("--count", count, "number of sections");

    auto* izone = app.add_subcommand("izone", "estimate the influence-zone size k_max");
    izone->add_option("--out", out_path, "output directory")->required();
    izone->add_option("--samples", samples, "random systems");
    izone->add_option("--m", m_probe, "members per system");
    izone->add_option("--seed", seed, "seed");

    auto* dataset = app.add_subcommand("dataset", "dataset tools");
    dataset->require_subcommand(1);
    auto* dataset_generate = dataset->add_subcommand("generate", "generate a window dataset");
    dataset_generate->add_option("--out", out_path, "output directory")->required();
    dataset_generate->add_option("--count", count, "data points");
    dataset_generate->add_option("--seed", seed, "seed");
    dataset_generate->add_option("--kmax", kmax, "window half-width");

    auto* train_cmd = app.add_subcommand("train", "train a surrogate network");
    train_cmd->add_option("--data", data_path, "dataset directory")->required();
    train_cmd->add_option("--out", out_path, "checkpoint file")->required();
    train_cmd->add_option("--epochs", epochs, "epochs");
    train_cmd->add_option("--seed", seed, "initialiser seed");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "metrics of a checkpoint on a dataset");
    evaluate_cmd->add_option("--model", model_path, "checkpoint")->required();
    evaluate_cmd->add_option("--data", data_path, "dataset directory")->required();
    evaluate_cmd->add_option("--out", out_path, "output directory")->required();

    auto* study = app.add_subcommand("study", "hyperparameter studies");
    study->require_subcommand(1);
    std::vector<std::pair<CLI::App*, GridAxis>> study_cmds;
    for (GridAxis axis : {GridAxis::loss_activation, GridAxis::depths, GridAxis::heights,
                          GridAxis::dataset_sizes}) {
        auto* sc = study->add_subcommand(std::string(to_string(axis)), "study along one axis");
        sc->add_option("--data", data_path, "dataset directory")->required();
        sc->add_option("--out", out_path, "output directory")->required();
        study_cmds.emplace_back(sc, axis);
    }

    auto* generalize = app.add_subcommand("generalize", "metrics over system sizes");
    generalize->add_option("--model", model_path, "checkpoint")->required();
    generalize->add_option("--out", out_path, "output directory")->required();
    generalize->add_option("--m-min", m_min, "smallest system size");
    generalize->add_option("--m-max", m_max, "largest system size");
    generalize->add_option("--points", points, "points per size");
    generalize->add_option("--seed", seed, "seed");

    auto* disperse = app.add_subcommand("disperse", "decile dispersion and load heatmap");
    disperse->add_option("--model", model_path, "checkpoint")->required();
    disperse->add_option("--data", data_path, "dataset directory")->required();
    disperse->add_option("--out", out_path, "output directory")->required();
    disperse->add_option("--partition", partition, "train, validation or test");

    auto* robust = app.add_subcommand("robust", "initialiser-seed robustness");
    robust->add_option("--data", data_path, "dataset directory")->required();
    robust->add_option("--out", out_path, "output directory")->required();
    robust->add_option("--seeds", seeds, "initialiser seeds")->delimiter(',');

    auto* predict_cmd = app.add_subcommand("predict", "predict one window");
    predict_cmd->add_option("--model", model_path, "checkpoint")->required();
    predict_cmd->add_option("--window", window, "comma-separated spans then UDLs")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    Context ctx;
    ctx.out = &out;
    for (int i = 0; i < argc; ++i) ctx.argv.emplace_back(argv[i]);
    try {
        Settings& s = ctx.settings;
        if (!config_path.empty()) apply_config_file(s, config_path);
        if (const std::size_t env = threads_from_env()) s.threads = env;
        if (threads) s.threads = *threads;

        if (sections_export->parsed()) {
            if (count) s.catalog_count = *count;
            cmd_sections_export(ctx, out_path);
        } else if (izone->parsed()) {
            if (samples) s.izone_samples = *samples;
            if (m_probe) s.izone_m = *m_probe;
            if (seed) s.izone_seed = *seed;
            cmd_izone(ctx, out_path);
        } else if (dataset_generate->parsed()) {
            if (count) s.dataset_count = *count;
            if (seed) s.dataset_seed = *seed;
            if (kmax) s.k_max = *kmax;
            cmd_dataset_generate(ctx, out_path);
        } else if (train_cmd->parsed()) {
            if (epochs) s.net.epochs = *epochs;
            if (seed) s.net.seed = *seed;
            cmd_train(ctx, data_path, out_path);
        } else if (evaluate_cmd->parsed()) {
            cmd_evaluate(ctx, model_path, data_path, out_path);
        } else if (generalize->parsed()) {
            if (m_min) s.generalize_m_min = *m_min;
            if (m_max) s.generalize_m_max = *m_max;
            if (points) s.generalize_points = *points;
            if (seed) s.generalize_seed = *seed;
            cmd_generalize(ctx, model_path, out_path);
        } else if (disperse->parsed()) {
            if (partition) s.disperse_partition = *partition;
            cmd_disperse(ctx, model_path, data_path, out_path);
        } else if (robust->parsed()) {
            if (!seeds.empty()) s.robust_seeds = seeds;
            cmd_robust(ctx, data_path, out_path);
        } else if (predict_cmd->parsed()) {
            cmd_predict(ctx, model_path, window);
        } else {
            for (const auto& [sc, axis] : study_cmds) {
                if (sc->parsed()) cmd_study(ctx, axis, data_path, out_path);
            }
        }
    } catch (const ConfigError& e) {
        err << "config: " << e.what() << '\n';
        return 2;
    } catch (const beamforge::Error& e) {
        err << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "cli: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace beamforge::cli
