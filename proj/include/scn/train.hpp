#pragma once

#include <utility>
#include <vector>

#include "scn/dataset.hpp"
#include "scn/net.hpp"
#include "scn/verify.hpp"

namespace scn {

struct TrainRecord {
    int64_t iteration = 0;
    double loss = 0.0;  // mean weighted cross-entropy on the eval set
    Score csi, pod, far;
};

struct TrainHistory {
    std::vector<TrainRecord> records;
};

struct EvalResult {
    double loss = 0.0;
    ContingencyTable table;
    Score csi, pod, far;
};

// Classifies every sample at the threshold (0.5 = argmax for two classes)
// and scores against the labels. If probs_out is given it receives p1 per
// sample.
EvalResult evaluate(const ScnModel& model, const SampleSet& samples, double threshold = 0.5,
                    std::vector<double>* probs_out = nullptr);

// Seeded SGD: fan-in uniform init, uniform minibatch sampling with
// replacement, evaluation on eval_set every config.eval_every iterations.
// Returns the checkpoint with the best eval CSI (ties resolved to the
// earliest; an undefined CSI ranks below any defined one) and the full
// history. Bit-deterministic in config.seed for any thread count.
std::pair<ScnModel, TrainHistory> train(const SampleSet& train_set, const SampleSet& eval_set,
                                        const ScnConfig& config);

}  // namespace scn
