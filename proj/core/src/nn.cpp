#include "beamforge/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "beamforge/error.hpp"
#include "beamforge/sampling.hpp"

namespace beamforge {

namespace {

constexpr const char* module_name = "neural-net";
constexpr std::uint64_t init_stream = 0x1417'0001ULL;
constexpr std::uint64_t shuffle_stream = 0x1417'0002ULL;

double stable_sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double sign_or_zero(double d) { return d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
        case Activation::tanh: return "tanh";
        case Activation::exp: return "exp";
    }
    return "?";
}

std::string_view to_string(Loss l) {
    switch (l) {
        case Loss::mae: return "mae";
        case Loss::mse: return "mse";
        case Loss::mape: return "mape";
        case Loss::mspe: return "mspe";
    }
    return "?";
}

Activation activation_from_string(std::string_view name) {
    for (auto a : {Activation::relu, Activation::sigmoid, Activation::tanh, Activation::exp}) {
        if (name == to_string(a)) return a;
    }
    throw InvalidArgument(module_name, "unknown activation '" + std::string(name) + "'");
}

Loss loss_from_string(std::string_view name) {
    for (auto l : {Loss::mae, Loss::mse, Loss::mape, Loss::mspe}) {
        if (name == to_string(l)) return l;
    }
    throw InvalidArgument(module_name, "unknown loss '" + std::string(name) + "'");
}

Eigen::MatrixXd activate(Activation a, const Eigen::MatrixXd& z) {
    switch (a) {
        case Activation::relu: return z.cwiseMax(0.0);
        case Activation::sigmoid: return z.unaryExpr(&stable_sigmoid);
        case Activation::tanh: return z.array().tanh().matrix();
        case Activation::exp: return z.array().exp().matrix();
    }
    return z;
}

Eigen::MatrixXd activation_derivative(Activation a, const Eigen::MatrixXd& z,
                                      const Eigen::MatrixXd& out) {
    switch (a) {
        case Activation::relu: return (z.array() > 0.0).cast<double>().matrix();
        case Activation::sigmoid: return (out.array() * (1.0 - out.array())).matrix();
        case Activation::tanh: return (1.0 - out.array().square()).matrix();
        case Activation::exp: return out;
    }
    return out;
}

LossValue loss_and_gradient(Loss loss, const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target,
                            double eps) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
        throw InvalidArgument(module_name, "prediction and target shapes differ");
    }
    LossValue out;
    const double p = static_cast<double>(pred.size());
    if (pred.size() == 0) {
        out.gradient = Eigen::MatrixXd::Zero(pred.rows(), pred.cols());
        return out;
    }
    const Eigen::ArrayXXd d = (pred - target).array();
    const Eigen::ArrayXXd denom = (target.array() + eps).abs();
    switch (loss) {
        case Loss::mae:
            out.value = d.abs().sum() / p;
            out.gradient = (d.unaryExpr(&sign_or_zero) / p).matrix();
            break;
        case Loss::mse:
            out.value = d.square().sum() / (2.0 * p);
            out.gradient = (d / p).matrix();
            break;
        case Loss::mape:
            out.value = (d.abs() / denom).sum() / p;
            out.gradient = (d.unaryExpr(&sign_or_zero) / (p * denom)).matrix();
            break;
        case Loss::mspe:
            out.value = (d.square() / denom).sum() / (2.0 * p);
            out.gradient = (d / (p * denom)).matrix();
            break;
    }
    return out;
}

void NetworkConfig::validate() const {
    const auto fail = [](const std::string& what) { throw InvalidArgument(module_name, what); };
    if (input_size < 1) fail("input_size must be positive");
    if (output_size < 1) fail("output_size must be positive");
    for (std::size_t h : hidden) {
        if (h < 1) fail("hidden layer heights must be positive");
    }
    if (inner == Activation::exp) fail("inner activation must be relu, sigmoid or tanh");
    if (outer == Activation::tanh) fail("outer activation must be relu, sigmoid or exp");
    if (!(learning_rate > 0.0)) fail("learning rate must be > 0");
    if (batch_size < 1) fail("batch size must be positive");
    if (!(init_sigma >= 0.0)) fail("init_sigma must be >= 0");
    if (!(loss_epsilon > 0.0)) fail("loss_epsilon must be > 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        fail("Nadam betas must lie in [0, 1)");
    }
    if (!(nadam_epsilon > 0.0)) fail("Nadam epsilon must be > 0");
}

Mlp::Mlp(NetworkConfig config) : config_(std::move(config)) {
    config_.validate();
    Rng rng(substream_seed(config_.seed, init_stream));
    std::normal_distribution<double> gauss(0.0, config_.init_sigma);
    const auto draw = [&]() { return config_.init_sigma > 0.0 ? gauss(rng) : 0.0; };

    std::size_t in = config_.input_size;
    std::vector<std::size_t> outs = config_.hidden;
    outs.push_back(config_.output_size);
    for (std::size_t out : outs) {
        DenseLayer l;
        l.weights.resize(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
        l.bias.resize(static_cast<Eigen::Index>(out));
        for (Eigen::Index j = 0; j < l.weights.cols(); ++j) {
            for (Eigen::Index i = 0; i < l.weights.rows(); ++i) l.weights(i, j) = draw();
        }
        for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = draw();
        layers_.push_back(std::move(l));
        in = out;
    }
}

Mlp::Mlp(NetworkConfig config, std::vector<DenseLayer> layers)
    : config_(std::move(config)), layers_(std::move(layers)) {
    config_.validate();
    std::size_t in = config_.input_size;
    std::vector<std::size_t> outs = config_.hidden;
    outs.push_back(config_.output_size);
    if (layers_.size() != outs.size()) throw InvalidArgument(module_name, "layer count mismatch");
    for (std::size_t d = 0; d < outs.size(); ++d) {
        const auto& l = layers_[d];
        if (l.weights.rows() != static_cast<Eigen::Index>(outs[d]) ||
            l.weights.cols() != static_cast<Eigen::Index>(in) ||
            l.bias.size() != static_cast<Eigen::Index>(outs[d])) {
            throw InvalidArgument(module_name, "layer " + std::to_string(d) + " has wrong shape");
        }
        if (!l.weights.allFinite() || !l.bias.allFinite()) {
            throw InvalidArgument(module_name, "layer " + std::to_string(d) + " is not finite");
        }
        in = outs[d];
    }
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
    return n;
}

void Mlp::check_input(const Eigen::MatrixXd& x) const {
    if (x.rows() != static_cast<Eigen::Index>(config_.input_size)) {
        throw InvalidArgument(module_name, "input has " + std::to_string(x.rows()) +
                                               " rows, network expects " +
                                               std::to_string(config_.input_size));
    }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
    check_input(x);
    Eigen::MatrixXd a = x;
    for (std::size_t d = 0; d < layers_.size(); ++d) {
        const auto& l = layers_[d];
        Eigen::MatrixXd z = l.weights * a;
        z.colwise() += l.bias;
        a = activate(d + 1 == layers_.size() ? config_.outer : config_.inner, z);
    }
    if (!a.allFinite()) throw DivergenceError(module_name, "non-finite network output");
    return a;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
    const Eigen::MatrixXd col = x;
    return forward(col).col(0);
}

double Mlp::loss_and_gradients(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                               Gradients& grads) const {
    check_input(x);
    const std::size_t depth = layers_.size();
    std::vector<Eigen::MatrixXd> zs(depth);
    std::vector<Eigen::MatrixXd> as(depth + 1);
    as[0] = x;
    for (std::size_t d = 0; d < depth; ++d) {
        zs[d] = layers_[d].weights * as[d];
        zs[d].colwise() += layers_[d].bias;
        as[d + 1] = activate(d + 1 == depth ? config_.outer : config_.inner, zs[d]);
    }
    const LossValue lv = loss_and_gradient(config_.loss, as[depth], y, config_.loss_epsilon);

    grads.weights.resize(depth);
    grads.bias.resize(depth);
    Eigen::MatrixXd delta =
        lv.gradient.cwiseProduct(activation_derivative(config_.outer, zs[depth - 1], as[depth]));
    for (std::size_t d = depth; d-- > 0;) {
        grads.weights[d].noalias() = delta * as[d].transpose();
        grads.bias[d] = delta.rowwise().sum();
        if (d == 0) break;
        Eigen::MatrixXd back = layers_[d].weights.transpose() * delta;
        delta = back.cwiseProduct(activation_derivative(config_.inner, zs[d - 1], as[d]));
    }
    return lv.value;
}

Eigen::VectorXd Mlp::parameters() const {
    Eigen::VectorXd theta(static_cast<Eigen::Index>(parameter_count()));
    Eigen::Index k = 0;
    for (const auto& l : layers_) {
        theta.segment(k, l.weights.size()) = l.weights.reshaped();
        k += l.weights.size();
        theta.segment(k, l.bias.size()) = l.bias;
        k += l.bias.size();
    }
    return theta;
}

void Mlp::set_parameters(const Eigen::VectorXd& theta) {
    if (theta.size() != static_cast<Eigen::Index>(parameter_count())) {
        throw InvalidArgument(module_name, "parameter vector has the wrong length");
    }
    Eigen::Index k = 0;
    for (auto& l : layers_) {
        l.weights.reshaped() = theta.segment(k, l.weights.size());
        k += l.weights.size();
        l.bias = theta.segment(k, l.bias.size());
        k += l.bias.size();
    }
}

Eigen::VectorXd Mlp::flatten(const Gradients& grads) {
    Eigen::Index n = 0;
    for (std::size_t d = 0; d < grads.weights.size(); ++d) {
        n += grads.weights[d].size() + grads.bias[d].size();
    }
    Eigen::VectorXd g(n);
    Eigen::Index k = 0;
    for (std::size_t d = 0; d < grads.weights.size(); ++d) {
        g.segment(k, grads.weights[d].size()) = grads.weights[d].reshaped();
        k += grads.weights[d].size();
        g.segment(k, grads.bias[d].size()) = grads.bias[d];
        k += grads.bias[d].size();
    }
    return g;
}

Nadam::Nadam(const Mlp& model) {
    for (const auto& l : model.layers()) {
        m_.weights.push_back(Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()));
        m_.bias.push_back(Eigen::VectorXd::Zero(l.bias.size()));
    }
    v_ = m_;
}

void Nadam::step(Mlp& model, const Gradients& g) {
    const NetworkConfig& c = model.config();
    ++t_;
    const double t = static_cast<double>(t_);
    const double b1 = c.beta1;
    const double b2 = c.beta2;
    const double mom_scale = b1 / (1.0 - std::pow(b1, t + 1.0));
    const double grad_scale = (1.0 - b1) / (1.0 - std::pow(b1, t));
    const double v_scale = 1.0 / (1.0 - std::pow(b2, t));
    const double alpha = c.learning_rate;
    const double eps = c.nadam_epsilon;

    const auto update = [&](auto& theta, auto& m, auto& v, const auto& grad) {
        m = b1 * m + (1.0 - b1) * grad;
        v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
        const auto m_hat = (mom_scale * m.array() + grad_scale * grad.array());
        const auto v_hat = v_scale * v.array();
        theta.array() -= alpha * m_hat / (v_hat.sqrt() + eps);
    };
    auto& layers = model.layers();
    for (std::size_t d = 0; d < layers.size(); ++d) {
        update(layers[d].weights, m_.weights[d], v_.weights[d], g.weights[d]);
        update(layers[d].bias, m_.bias[d], v_.bias[d], g.bias[d]);
    }
}

MetricsReport evaluate(const Mlp& model, const Partition& part, const Scales& scales) {
    if (part.rows() == 0) throw InvalidArgument(module_name, "cannot evaluate an empty partition");
    const Eigen::MatrixXd pred = model.forward(part.x);
    Eigen::VectorXd ts(static_cast<Eigen::Index>(target_count));
    for (std::size_t c = 0; c < target_count; ++c) ts(static_cast<Eigen::Index>(c)) = scales.targets[c];
    return metrics_report(pred, part.y, ts, model.config().loss_epsilon);
}

TrainResult train(Mlp& model, const DatasetBundle& bundle, const TrainOptions& options) {
    return train(model, normalize(bundle.train, bundle.scales),
                 normalize(bundle.validation, bundle.scales), bundle.scales, options);
}

TrainResult train(Mlp& model, const Partition& tp, const Partition& vp, const Scales& scales,
                  const TrainOptions& options) {
    const NetworkConfig& c = model.config();
    c.validate();
    if (tp.rows() == 0) throw InvalidArgument(module_name, "training partition is empty");
    if (tp.x.rows() != static_cast<Eigen::Index>(c.input_size) ||
        tp.y.rows() != static_cast<Eigen::Index>(c.output_size)) {
        throw InvalidArgument(module_name, "dataset width does not match the network");
    }
    const std::size_t every = std::max<std::size_t>(options.metrics_every, 1);

    Nadam opt(model);
    Rng rng(substream_seed(c.seed, shuffle_stream));
    std::vector<Eigen::Index> order(tp.rows());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Gradients grads;
    TrainResult result;
    const std::size_t start = model.epoch();

    for (std::size_t e = start + 1; e <= start + c.epochs; ++e) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        std::size_t batch = 0;
        for (std::size_t b0 = 0; b0 < order.size(); b0 += c.batch_size, ++batch) {
            const std::size_t b1 = std::min(order.size(), b0 + c.batch_size);
            const std::vector<Eigen::Index> cols(order.begin() + static_cast<std::ptrdiff_t>(b0),
                                                 order.begin() + static_cast<std::ptrdiff_t>(b1));
            const Eigen::MatrixXd xb = tp.x(Eigen::all, cols);
            const Eigen::MatrixXd yb = tp.y(Eigen::all, cols);
            const double loss = model.loss_and_gradients(xb, yb, grads);
            if (!std::isfinite(loss)) {
                std::ostringstream os;
                os << "non-finite loss at epoch " << e << ", batch " << batch << "; layer norms:";
                for (const auto& l : model.layers()) os << ' ' << l.weights.norm();
                throw DivergenceError(module_name, os.str());
            }
            opt.step(model, grads);
            loss_sum += loss * static_cast<double>(b1 - b0);
        }
        model.set_epoch(e);

        EpochRecord rec;
        rec.epoch = e;
        rec.train_loss = loss_sum / static_cast<double>(order.size());
        if ((e - start) % every == 0 || e == start + c.epochs) {
            rec.train = evaluate(model, tp, scales);
            if (vp.rows() > 0) rec.validation = evaluate(model, vp, scales);
        }
        result.history.push_back(rec);
        if (options.on_epoch && !options.on_epoch(rec)) break;
    }
    return result;
}

std::array<double, target_count> predict(const Mlp& model, const Scales& scales,
                                         const std::vector<double>& window) {
    return denormalize_targets(model.forward(normalize_inputs(window, scales)), scales);
}

}  // namespace beamforge
