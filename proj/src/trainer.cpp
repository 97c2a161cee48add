#include "mtom/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mtom/metrics.hpp"
#include "mtom/rng.hpp"

namespace mtom {

namespace {

constexpr const char* kTrainTag = "mtom-train-v1";
const double kLn2 = std::log(2.0);

// Substream ids for the independent random consumers of one training run.
enum Stream : std::uint64_t {
    kEncoderInit = 10,
    kDecoderInit = 11,
    kBatchLabels = 12,
    kChannelNoise = 13,
    kEvaluation = 14,
};

void check_config(const TrainConfig& cfg) {
    if (cfg.m < 1 || cfg.m > 16) throw std::invalid_argument("train: m must lie in [1, 16]");
    if (cfg.n_d < 0.0 || cfg.n_d > cfg.m - 1)
        throw std::invalid_argument("train: n_d must lie in [0, m-1]");
    if (cfg.batch_size < 2) throw std::invalid_argument("train: batch size must be >= 2");
    if (cfg.steps < 1) throw std::invalid_argument("train: steps must be >= 1");
    if (cfg.eval_every < 1) throw std::invalid_argument("train: eval_every must be >= 1");
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("train: learning rate must be > 0");
    for (int h : cfg.hidden)
        if (h < 1) throw std::invalid_argument("train: hidden layer sizes must be >= 1");
}

// Bipolar bit encoding of a label: bit value 0 -> +1, 1 -> -1.
void fill_label_inputs(Eigen::MatrixXd& x, const std::vector<std::uint32_t>& labels, int m) {
    for (Eigen::Index k = 0; k < x.rows(); ++k)
        for (int i = 0; i < m; ++i) x(k, i) = label_bit(labels[k], i, m) ? -1.0 : 1.0;
}

Constellation lut_from_encoder_output(const Eigen::MatrixXd& out, int m) {
    const std::size_t M = std::size_t{1} << m;
    Constellation c;
    c.m = m;
    c.points.resize(M);
    c.labels.resize(M);
    for (std::size_t k = 0; k < M; ++k) {
        c.points[k] = {out(static_cast<Eigen::Index>(k), 0), out(static_cast<Eigen::Index>(k), 1)};
        c.labels[k] = static_cast<std::uint32_t>(k);
    }
    return normalize(c);
}

double launch_power_for(const ChannelParams& chan, const MomentSet& mom) {
    if (chan.launch_power_fixed) return chan.launch_power;
    return optimal_launch_power(chan, mom).power;
}

}  // namespace

Constellation export_lut(const MlpNetwork& encoder, int m) {
    const std::size_t M = std::size_t{1} << m;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(M), m);
    std::vector<std::uint32_t> labels(M);
    for (std::size_t k = 0; k < M; ++k) labels[k] = static_cast<std::uint32_t>(k);
    fill_label_inputs(x, labels, m);
    return lut_from_encoder_output(mlp_forward(encoder, x), m);
}

TrainResult train(const TrainConfig& cfg) {
    check_config(cfg);
    const int m = cfg.m;
    const int data_bits = data_positions(m, cfg.n_d);
    const std::uint32_t M = 1u << m;
    const int B = cfg.batch_size;

    MlpNetwork encoder = [&] {
        std::vector<int> dims{m};
        dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
        dims.push_back(2);
        return mlp_init(dims, Activation::Relu, Rng::derive(cfg.seed, kEncoderInit));
    }();
    MlpNetwork decoder = [&] {
        std::vector<int> dims{2};
        dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
        dims.push_back(m);
        return mlp_init(dims, Activation::Relu, Rng::derive(cfg.seed, kDecoderInit));
    }();
    OptimizerState enc_opt = make_optimizer(encoder, cfg.learning_rate);
    OptimizerState dec_opt = make_optimizer(decoder, cfg.learning_rate);

    Rng label_rng = Rng::substream(cfg.seed, kBatchLabels);
    Rng noise_rng = Rng::substream(cfg.seed, kChannelNoise);
    const std::uint64_t eval_seed = Rng::derive(cfg.seed, kEvaluation);

    TrainTrace trace;
    trace.step_costs.reserve(cfg.steps);

    // Operating launch power, held fixed between evaluation cadences.
    double launch_power = launch_power_for(cfg.channel, moments(export_lut(encoder, m)));
    double op_sigma2 = 0.0;

    std::vector<std::uint32_t> labels(B);
    Eigen::MatrixXd x_in(B, m);

    auto evaluate = [&](int step, double cost) {
        const Constellation lut = export_lut(encoder, m);
        const MomentSet mom = moments(lut);
        launch_power = launch_power_for(cfg.channel, mom);
        const NoiseVariance nv = effective_noise_variance_at(cfg.channel, mom, launch_power);
        op_sigma2 = nv.sigma2 / launch_power;
        const GmiReport gmi =
            gmi_estimate(lut, op_sigma2, cfg.eval_symbols, eval_seed, cfg.n_d);
        const GroupStructure gs = group_structure(lut, cfg.n_d);
        trace.records.push_back({step, cost, gmi.total_gmi, mom.mu4, gs.max_intra_ed,
                                 gs.inter_min_ed});
    };

    for (int step = 0; step < cfg.steps; ++step) {
        for (int k = 0; k < B; ++k) labels[k] = label_rng.uniform_u32(M);
        fill_label_inputs(x_in, labels, m);

        ForwardCache enc_cache;
        const Eigen::MatrixXd raw = mlp_forward(encoder, x_in, &enc_cache);

        // Batch power normalization (inside the graph).
        const double rms = std::max(std::sqrt(raw.squaredNorm() / B), 1e-12);
        const Eigen::MatrixXd xhat = raw / rms;

        // Channel noise from the current batch moments, constant w.r.t. grads.
        MomentSet batch_mom;
        batch_mom.mu2 = 1.0;
        for (int k = 0; k < B; ++k) {
            const double a2 = xhat(k, 0) * xhat(k, 0) + xhat(k, 1) * xhat(k, 1);
            batch_mom.mu4 += a2 * a2;
            batch_mom.mu6 += a2 * a2 * a2;
        }
        batch_mom.mu4 /= B;
        batch_mom.mu6 /= B;
        const NoiseVariance nv = effective_noise_variance_at(cfg.channel, batch_mom, launch_power);
        const double sigma2 = nv.sigma2 / launch_power;

        Eigen::MatrixXd y = xhat;
        const double nsd = std::sqrt(sigma2 / 2.0);
        for (int k = 0; k < B; ++k) {
            y(k, 0) += nsd * noise_rng.normal();
            y(k, 1) += nsd * noise_rng.normal();
        }

        ForwardCache dec_cache;
        const Eigen::MatrixXd logits = mlp_forward(decoder, y, &dec_cache);

        // Masked BCE over the data bits and its gradient w.r.t. the logits.
        double cost = 0.0;
        Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(B, m);
        const double grad_scale = 1.0 / (kLn2 * data_bits * B);
        for (int k = 0; k < B; ++k) {
            for (int i = 0; i < data_bits; ++i) {
                const double z = logits(k, i);
                const double u = label_bit(labels[k], i, m);  // p(bit=1) = logistic(z)
                const double s = u > 0.5 ? z : -z;            // softplus(-s) = -ln p(true)
                cost += std::log1p(std::exp(-std::abs(s))) + std::max(-s, 0.0);
                const double p1 = 1.0 / (1.0 + std::exp(-z));
                d_logits(k, i) = (p1 - u) * grad_scale;
            }
        }
        cost /= kLn2 * data_bits * B;
        trace.step_costs.push_back(cost);
        if (!std::isfinite(cost))
            throw TrainDivergedError("train: non-finite cost at step " + std::to_string(step),
                                     trace);

        Eigen::MatrixXd d_y;
        const Gradients dec_grads = mlp_backward(decoder, dec_cache, d_logits, &d_y);

        // Through the noise addition (identity) and the normalization.
        const double center = (d_y.array() * xhat.array()).sum() / B;
        const Eigen::MatrixXd d_raw = (d_y - xhat * center) / rms;
        const Gradients enc_grads = mlp_backward(encoder, enc_cache, d_raw);

        optimizer_step(decoder, dec_grads, dec_opt);
        optimizer_step(encoder, enc_grads, enc_opt);

        if (step % cfg.eval_every == 0) evaluate(step, cost);
    }
    evaluate(cfg.steps, trace.step_costs.back());

    TrainResult result;
    result.constellation = export_lut(encoder, m);
    result.trace = std::move(trace);
    result.encoder = std::move(encoder);
    result.decoder = std::move(decoder);
    result.sigma2 = op_sigma2;
    result.snr_db = sigma2_to_snr_db(op_sigma2);
    return result;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("train config: not valid JSON: ") + e.what());
    }
    if (!j.contains("format") || j["format"] != kTrainTag)
        throw FormatError("train config: missing or unknown format tag (want mtom-train-v1)");

    TrainConfig cfg;
    try {
        cfg.m = j.at("m").get<int>();
        cfg.n_d = j.at("n_d").get<double>();
        if (j.contains("hidden")) cfg.hidden = j["hidden"].get<std::vector<int>>();
        if (j.contains("learning_rate")) cfg.learning_rate = j["learning_rate"].get<double>();
        if (j.contains("batch_size")) cfg.batch_size = j["batch_size"].get<int>();
        if (j.contains("steps")) cfg.steps = j["steps"].get<int>();
        if (j.contains("eval_every")) cfg.eval_every = j["eval_every"].get<int>();
        if (j.contains("eval_symbols")) cfg.eval_symbols = j["eval_symbols"].get<std::size_t>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        const std::string chan_ref = j.at("channel").get<std::string>();
        std::filesystem::path chan_path(chan_ref);
        if (chan_path.is_relative()) chan_path = path.parent_path() / chan_path;
        cfg.channel = load_channel(chan_path);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("train config: ") + e.what());
    }
    check_config(cfg);
    return cfg;
}

std::string trace_csv(const TrainTrace& trace) {
    std::string out = "step,cost,gmi,mu4,intra_max_ed,inter_min_ed\n";
    char buf[160];
    for (const auto& r : trace.records) {
        std::snprintf(buf, sizeof buf, "%d,%.9f,%.9f,%.9f,%.9f,%.9f\n", r.step, r.cost,
                      r.data_gmi, r.mu4, r.intra_max_ed, r.inter_min_ed);
        out += buf;
    }
    return out;
}

}  // namespace mtom
