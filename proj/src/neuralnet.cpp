#include "mtom/neuralnet.hpp"

#include <cmath>

#include "mtom/errors.hpp"
#include "mtom/rng.hpp"

namespace mtom {

namespace {

Eigen::MatrixXd apply_activation(const Eigen::MatrixXd& z, Activation act) {
    switch (act) {
        case Activation::Linear:
            return z;
        case Activation::Relu:
            return z.cwiseMax(0.0);
        case Activation::Tanh:
            return z.array().tanh().matrix();
    }
    return z;
}

// Elementwise derivative evaluated from the pre-activation.
Eigen::ArrayXXd activation_deriv(const Eigen::MatrixXd& z, Activation act) {
    switch (act) {
        case Activation::Linear:
            return Eigen::ArrayXXd::Ones(z.rows(), z.cols());
        case Activation::Relu:
            return (z.array() > 0.0).cast<double>();
        case Activation::Tanh: {
            Eigen::ArrayXXd t = z.array().tanh();
            return 1.0 - t.square();
        }
    }
    return Eigen::ArrayXXd::Ones(z.rows(), z.cols());
}

}  // namespace

std::size_t MlpNetwork::parameter_count() const {
    std::size_t n = 0;
    for (int l = 0; l < layer_count(); ++l)
        n += static_cast<std::size_t>(weights[l].size()) + static_cast<std::size_t>(biases[l].size());
    return n;
}

MlpNetwork mlp_init(const std::vector<int>& dims, Activation hidden_act, std::uint64_t seed) {
    if (dims.size() < 2) throw std::invalid_argument("mlp_init: need at least input and output dims");
    for (int d : dims)
        if (d <= 0) throw std::invalid_argument("mlp_init: zero-size layer");

    MlpNetwork net;
    net.dims = dims;
    net.hidden_act = hidden_act;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const int fan_in = dims[l];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        Eigen::MatrixXd w(dims[l], dims[l + 1]);
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-limit, limit);
        net.weights.push_back(std::move(w));
        net.biases.push_back(Eigen::RowVectorXd::Zero(dims[l + 1]));
    }
    return net;
}

Eigen::MatrixXd mlp_forward(const MlpNetwork& net, const Eigen::MatrixXd& input,
                            ForwardCache* cache) {
    if (input.cols() != net.dims.front())
        throw std::invalid_argument("mlp_forward: input width does not match dims[0]");
    if (!input.allFinite()) throw NumericError("mlp_forward: non-finite input");

    if (cache) {
        cache->net = &net;
        cache->act.clear();
        cache->pre.clear();
        cache->act.push_back(input);
    }
    Eigen::MatrixXd a = input;
    const int L = net.layer_count();
    for (int l = 0; l < L; ++l) {
        Eigen::MatrixXd z = (a * net.weights[l]).rowwise() + net.biases[l];
        const Activation act = (l == L - 1) ? Activation::Linear : net.hidden_act;
        a = apply_activation(z, act);
        if (cache) {
            cache->pre.push_back(std::move(z));
            cache->act.push_back(a);
        }
    }
    return a;
}

Gradients mlp_backward(const MlpNetwork& net, const ForwardCache& cache,
                       const Eigen::MatrixXd& output_grad, Eigen::MatrixXd* input_grad) {
    const int L = net.layer_count();
    if (cache.net != &net || static_cast<int>(cache.pre.size()) != L ||
        static_cast<int>(cache.act.size()) != L + 1)
        throw InvalidStateError("mlp_backward: cache does not match this network");
    if (output_grad.rows() != cache.act.back().rows() ||
        output_grad.cols() != cache.act.back().cols())
        throw InvalidStateError("mlp_backward: output gradient shape does not match cached forward");

    Gradients g;
    g.d_weights.resize(L);
    g.d_biases.resize(L);
    Eigen::MatrixXd delta = output_grad;  // output layer is linear
    for (int l = L - 1; l >= 0; --l) {
        g.d_weights[l].noalias() = cache.act[l].transpose() * delta;
        g.d_biases[l] = delta.colwise().sum();
        if (l > 0) {
            Eigen::MatrixXd back = delta * net.weights[l].transpose();
            delta = (back.array() * activation_deriv(cache.pre[l - 1], net.hidden_act)).matrix();
        } else if (input_grad) {
            input_grad->noalias() = delta * net.weights[0].transpose();
        }
    }
    return g;
}

OptimizerState make_optimizer(const MlpNetwork& net, double learning_rate) {
    OptimizerState s;
    s.learning_rate = learning_rate;
    for (int l = 0; l < net.layer_count(); ++l) {
        s.m_w.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
        s.v_w.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
        s.m_b.push_back(Eigen::RowVectorXd::Zero(net.biases[l].size()));
        s.v_b.push_back(Eigen::RowVectorXd::Zero(net.biases[l].size()));
    }
    return s;
}

void optimizer_step(MlpNetwork& net, const Gradients& grads, OptimizerState& state) {
    const int L = net.layer_count();
    if (static_cast<int>(grads.d_weights.size()) != L ||
        static_cast<int>(state.m_w.size()) != L)
        throw std::invalid_argument("optimizer_step: layer count mismatch");
    for (int l = 0; l < L; ++l) {
        if (grads.d_weights[l].rows() != net.weights[l].rows() ||
            grads.d_weights[l].cols() != net.weights[l].cols() ||
            grads.d_biases[l].size() != net.biases[l].size())
            throw std::invalid_argument("optimizer_step: gradient shape mismatch");
    }

    ++state.step_count;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
    const double lr = state.learning_rate;
    for (int l = 0; l < L; ++l) {
        auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
            m = state.beta1 * m + (1.0 - state.beta1) * grad;
            v = (state.beta2 * v.array() + (1.0 - state.beta2) * grad.array().square()).matrix();
            param.array() -=
                lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.epsilon);
        };
        update(net.weights[l], grads.d_weights[l], state.m_w[l], state.v_w[l]);
        update(net.biases[l], grads.d_biases[l], state.m_b[l], state.v_b[l]);
    }
}

}  // namespace mtom
