#include <fstream>
#include <nlohmann/json.hpp>

#include "beamforge/error.hpp"
#include "beamforge/nn.hpp"

namespace beamforge {

namespace {

using ordered_json = nlohmann::ordered_json;
constexpr const char* format_name = "beamforge-mlp";
constexpr int format_version = 1;

ordered_json config_json(const NetworkConfig& c) {
    return {{"input_size", c.input_size},
            {"output_size", c.output_size},
            {"hidden", c.hidden},
            {"inner", std::string(to_string(c.inner))},
            {"outer", std::string(to_string(c.outer))},
            {"loss", std::string(to_string(c.loss))},
            {"learning_rate", c.learning_rate},
            {"batch_size", c.batch_size},
            {"epochs", c.epochs},
            {"init_sigma", c.init_sigma},
            {"seed", c.seed},
            {"loss_epsilon", c.loss_epsilon},
            {"beta1", c.beta1},
            {"beta2", c.beta2},
            {"nadam_epsilon", c.nadam_epsilon}};
}

NetworkConfig config_from(const nlohmann::json& j) {
    NetworkConfig c;
    c.input_size = j.at("input_size").get<std::size_t>();
    c.output_size = j.at("output_size").get<std::size_t>();
    c.hidden = j.at("hidden").get<std::vector<std::size_t>>();
    c.inner = activation_from_string(j.at("inner").get<std::string>());
    c.outer = activation_from_string(j.at("outer").get<std::string>());
    c.loss = loss_from_string(j.at("loss").get<std::string>());
    c.learning_rate = j.at("learning_rate").get<double>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.epochs = j.at("epochs").get<std::size_t>();
    c.init_sigma = j.at("init_sigma").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.loss_epsilon = j.at("loss_epsilon").get<double>();
    c.beta1 = j.at("beta1").get<double>();
    c.beta2 = j.at("beta2").get<double>();
    c.nadam_epsilon = j.at("nadam_epsilon").get<double>();
    return c;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Mlp& model, const Scales& scales) {
    ordered_json j;
    j["format"] = format_name;
    j["version"] = format_version;
    j["config"] = config_json(model.config());
    j["epoch"] = model.epoch();
    j["scales"] = {{"inputs", scales.inputs}, {"targets", scales.targets}};
    ordered_json layers = ordered_json::array();
    for (const auto& l : model.layers()) {
        const std::vector<double> w(l.weights.data(), l.weights.data() + l.weights.size());
        const std::vector<double> b(l.bias.data(), l.bias.data() + l.bias.size());
        layers.push_back({{"rows", l.weights.rows()},
                          {"cols", l.weights.cols()},
                          {"weights_col_major", w},
                          {"bias", b}});
    }
    j["layers"] = std::move(layers);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw SchemaError("neural-net", "cannot write checkpoint " + path.string());
    os << j.dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw SchemaError("neural-net", "cannot read checkpoint " + path.string());
    try {
        const nlohmann::json j = nlohmann::json::parse(is);
        if (j.at("format").get<std::string>() != format_name ||
            j.at("version").get<int>() != format_version) {
            throw SchemaError("neural-net", path.string() + " is not a version 1 checkpoint");
        }
        NetworkConfig config = config_from(j.at("config"));
        std::vector<DenseLayer> layers;
        for (const auto& lj : j.at("layers")) {
            const auto rows = lj.at("rows").get<Eigen::Index>();
            const auto cols = lj.at("cols").get<Eigen::Index>();
            const auto w = lj.at("weights_col_major").get<std::vector<double>>();
            const auto b = lj.at("bias").get<std::vector<double>>();
            if (static_cast<Eigen::Index>(w.size()) != rows * cols ||
                static_cast<Eigen::Index>(b.size()) != rows) {
                throw SchemaError("neural-net", "layer array sizes do not match its shape");
            }
            DenseLayer l;
            l.weights = Eigen::Map<const Eigen::MatrixXd>(w.data(), rows, cols);
            l.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), rows);
            layers.push_back(std::move(l));
        }
        Scales scales;
        scales.inputs = j.at("scales").at("inputs").get<std::vector<double>>();
        const auto t = j.at("scales").at("targets").get<std::vector<double>>();
        if (t.size() != target_count || scales.inputs.size() != config.input_size) {
            throw SchemaError("neural-net", "checkpoint scales do not match the network");
        }
        std::copy(t.begin(), t.end(), scales.targets.begin());
        Mlp model(std::move(config), std::move(layers));
        model.set_epoch(j.at("epoch").get<std::size_t>());
        return {std::move(model), std::move(scales)};
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("neural-net", path.string() + ": " + e.what());
    }
}

}  // namespace beamforge
