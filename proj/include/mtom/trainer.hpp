#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mtom/channel.hpp"
#include "mtom/constellation.hpp"
#include "mtom/errors.hpp"
#include "mtom/neuralnet.hpp"

namespace mtom {

struct TrainConfig {
    int m = 8;
    double n_d = 0.0;
    std::vector<int> hidden = {256, 256};
    double learning_rate = 1e-3;
    int batch_size = 1024;
    int steps = 20000;
    int eval_every = 500;
    std::size_t eval_symbols = 20000;
    std::uint64_t seed = 1;
    ChannelParams channel;
};

struct TraceRecord {
    int step = 0;
    double cost = 0.0;       // masked BCE, bits
    double data_gmi = 0.0;   // data-bit GMI of the exported LUT
    double mu4 = 0.0;
    double intra_max_ed = 0.0;
    double inter_min_ed = 0.0;
};

struct TrainTrace {
    std::vector<TraceRecord> records;   // one per evaluation cadence
    std::vector<double> step_costs;     // per-step training cost
};

struct TrainResult {
    Constellation constellation;
    TrainTrace trace;
    MlpNetwork encoder;
    MlpNetwork decoder;
    double sigma2 = 0.0;   // operating noise variance at the end of training
    double snr_db = 0.0;
};

// Raised when the training cost goes non-finite; carries the partial trace.
struct TrainDivergedError : NumericError {
    TrainTrace trace;
    explicit TrainDivergedError(const std::string& what, TrainTrace t)
        : NumericError(what), trace(std::move(t)) {}
};

// Joint encoder/decoder optimization under the masked cost: per step, a batch
// of uniform labels is encoded, power-normalized over the batch (gradients
// flow through the normalization), perturbed with Gaussian noise whose
// variance follows the channel model at the held launch power and the current
// batch moments (constant w.r.t. gradients), decoded to per-bit logits, and
// both networks take an adaptive-moment step. The launch power is recomputed
// from the exported constellation every evaluation cadence.
TrainResult train(const TrainConfig& cfg);

// All 2^m labels through the encoder, exactly normalized.
Constellation export_lut(const MlpNetwork& encoder, int m);

// Train configuration file, tag "mtom-train-v1". The channel field names a
// channel config path resolved relative to the config file's directory.
TrainConfig load_train_config(const std::filesystem::path& path);

std::string trace_csv(const TrainTrace& trace);

}  // namespace mtom
