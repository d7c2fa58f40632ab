#pragma once

/**
 * @file nn.hpp
 * @brief Multilayer perceptron with analytic backpropagation and Nadam.
 *
 * Samples are stored as columns. Layer d maps x_d to a_d(W_d x_d + b_d);
 * hidden layers use the inner activation and the last layer the outer one.
 *
 * Losses over a batch of p = rows * columns elements, d = pred - target,
 * e = loss_epsilon:
 *   mae   (1/p)  sum |d|
 *   mse   (1/2p) sum d^2
 *   mape  (1/p)  sum |d / (target + e)|
 *   mspe  (1/2p) sum d^2 / |target + e|
 * Subgradients of |d| at d = 0 are taken as 0.
 *
 * Nadam, with step counter t starting at 1 and gradient g:
 *   m = b1 m + (1 - b1) g
 *   v = b2 v + (1 - b2) g^2
 *   m_hat = b1 m / (1 - b1^(t+1)) + (1 - b1) g / (1 - b1^t)
 *   v_hat = v / (1 - b2^t)
 *   theta -= alpha m_hat / (sqrt(v_hat) + eps)
 */

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "beamforge/dataset.hpp"
#include "beamforge/metrics.hpp"

namespace beamforge {

enum class Activation { relu, sigmoid, tanh, exp };
enum class Loss { mae, mse, mape, mspe };

[[nodiscard]] std::string_view to_string(Activation a);
[[nodiscard]] std::string_view to_string(Loss l);
[[nodiscard]] Activation activation_from_string(std::string_view name);
[[nodiscard]] Loss loss_from_string(std::string_view name);

/// Elementwise activation of pre-activations z.
[[nodiscard]] Eigen::MatrixXd activate(Activation a, const Eigen::MatrixXd& z);
/// da/dz given z and a = activate(z).
[[nodiscard]] Eigen::MatrixXd activation_derivative(Activation a, const Eigen::MatrixXd& z,
                                                    const Eigen::MatrixXd& out);

struct LossValue {
    double value = 0.0;
    Eigen::MatrixXd gradient;  ///< d value / d predictions
};

[[nodiscard]] LossValue loss_and_gradient(Loss loss, const Eigen::MatrixXd& predictions,
                                          const Eigen::MatrixXd& targets, double loss_epsilon);

struct NetworkConfig {
    std::size_t input_size = 22;
    std::size_t output_size = 3;
    std::vector<std::size_t> hidden{600, 600, 600};
    Activation inner = Activation::relu;
    Activation outer = Activation::exp;
    Loss loss = Loss::mape;
    double learning_rate = 5e-4;
    std::size_t batch_size = 1024;
    std::size_t epochs = 1000;
    double init_sigma = 0.05;
    std::uint64_t seed = 0;
    double loss_epsilon = 1e-7;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double nadam_epsilon = 1e-8;

    /// Throws InvalidArgument on any out-of-range field.
    void validate() const;
};

struct DenseLayer {
    Eigen::MatrixXd weights;  ///< out x in
    Eigen::VectorXd bias;
};

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> bias;
};

class Mlp {
public:
    /// Gaussian(0, init_sigma) weights and biases drawn from the config seed.
    explicit Mlp(NetworkConfig config);
    Mlp(NetworkConfig config, std::vector<DenseLayer> layers);

    [[nodiscard]] const NetworkConfig& config() const noexcept { return config_; }
    [[nodiscard]] const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
    [[nodiscard]] std::vector<DenseLayer>& layers() noexcept { return layers_; }
    [[nodiscard]] std::size_t parameter_count() const;

    [[nodiscard]] std::size_t epoch() const noexcept { return epoch_; }
    void set_epoch(std::size_t e) noexcept { epoch_ = e; }

    /// x is (input_size x batch). Throws on shape mismatch or a non-finite output.
    [[nodiscard]] Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
    [[nodiscard]] Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

    /// Batch loss and its gradient with respect to every parameter.
    double loss_and_gradients(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                              Gradients& grads) const;

    /// All parameters as one vector: per layer, weights (column-major) then bias.
    [[nodiscard]] Eigen::VectorXd parameters() const;
    void set_parameters(const Eigen::VectorXd& theta);
    [[nodiscard]] static Eigen::VectorXd flatten(const Gradients& grads);

private:
    void check_input(const Eigen::MatrixXd& x) const;

    NetworkConfig config_;
    std::vector<DenseLayer> layers_;
    std::size_t epoch_ = 0;
};

class Nadam {
public:
    explicit Nadam(const Mlp& model);

    void step(Mlp& model, const Gradients& grads);
    [[nodiscard]] std::size_t steps() const noexcept { return t_; }

private:
    Gradients m_;
    Gradients v_;
    std::size_t t_ = 0;
};

struct EpochRecord {
    std::size_t epoch = 0;  ///< 1-based
    double train_loss = 0.0;  ///< mean batch loss seen during the epoch
    MetricsReport train;
    MetricsReport validation;
};

struct TrainOptions {
    /// Evaluate full-partition metrics every this many epochs (and the last).
    std::size_t metrics_every = 1;
    /// Return false to stop early.
    std::function<bool(const EpochRecord&)> on_epoch;
};

struct TrainResult {
    std::vector<EpochRecord> history;
};

/// Trains on bundle.train, reporting validation metrics. Shuffling uses a
/// substream of the config seed. Throws DivergenceError on a non-finite loss.
TrainResult train(Mlp& model, const DatasetBundle& bundle, const TrainOptions& options = {});
TrainResult train(Mlp& model, const Partition& train_part, const Partition& validation_part,
                  const Scales& scales, const TrainOptions& options = {});

/// Accuracy on denormalised values, MAPE on normalised ones.
[[nodiscard]] MetricsReport evaluate(const Mlp& model, const Partition& part,
                                     const Scales& scales);

/// JSON checkpoint holding config, scales and raw parameters.
void save_checkpoint(const std::filesystem::path& path, const Mlp& model, const Scales& scales);

struct Checkpoint {
    Mlp model;
    Scales scales;
};

[[nodiscard]] Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Denormalised prediction for one raw window.
[[nodiscard]] std::array<double, target_count> predict(const Mlp& model, const Scales& scales,
                                                       const std::vector<double>& window);

}  // namespace beamforge
