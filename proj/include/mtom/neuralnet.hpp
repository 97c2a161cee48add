#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace mtom {

enum class Activation { Linear, Relu, Tanh };

// Feed-forward network with a fixed hidden activation and a linear output
// layer. Batches are row-major: one sample per row. A network instance is
// mutable during training (single writer); forward evaluation of a frozen
// network is pure.
struct MlpNetwork {
    std::vector<int> dims;            // input, hidden..., output widths
    Activation hidden_act = Activation::Relu;
    std::vector<Eigen::MatrixXd> weights;     // [l]: dims[l] x dims[l+1]
    std::vector<Eigen::RowVectorXd> biases;   // [l]: dims[l+1]

    int layer_count() const { return static_cast<int>(weights.size()); }
    std::size_t parameter_count() const;
};

// Deterministic scaled-uniform fan-in initialization; biases start at zero.
// The same seed yields bit-identical parameters.
MlpNetwork mlp_init(const std::vector<int>& dims, Activation hidden_act, std::uint64_t seed);

// Intermediates captured by forward() for the matching backward() call.
struct ForwardCache {
    std::vector<Eigen::MatrixXd> act;  // act[0] = input, act[l+1] = layer l output
    std::vector<Eigen::MatrixXd> pre;  // pre-activations per layer
    const MlpNetwork* net = nullptr;
};

Eigen::MatrixXd mlp_forward(const MlpNetwork& net, const Eigen::MatrixXd& input,
                            ForwardCache* cache = nullptr);

struct Gradients {
    std::vector<Eigen::MatrixXd> d_weights;
    std::vector<Eigen::RowVectorXd> d_biases;
};

// Exact gradients of whatever scalar produced output_grad = d(scalar)/d(output).
// input_grad, when non-null, receives d(scalar)/d(input).
Gradients mlp_backward(const MlpNetwork& net, const ForwardCache& cache,
                       const Eigen::MatrixXd& output_grad,
                       Eigen::MatrixXd* input_grad = nullptr);

// Adaptive-moment optimizer state, one accumulator pair per parameter tensor.
struct OptimizerState {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long step_count = 0;
    std::vector<Eigen::MatrixXd> m_w, v_w;
    std::vector<Eigen::RowVectorXd> m_b, v_b;
};

OptimizerState make_optimizer(const MlpNetwork& net, double learning_rate);

// One bias-corrected adaptive-moment update of net in place.
void optimizer_step(MlpNetwork& net, const Gradients& grads, OptimizerState& state);

}  // namespace mtom
