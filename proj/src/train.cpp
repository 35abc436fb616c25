#include "scn/train.hpp"

#include <cmath>
#include <stdexcept>

#include "scn/rng.hpp"

namespace scn {

namespace {

// Fills workspace slots [0, count) from the given sample indices.
void load_batch(const SampleSet& set, const size_t* idx, int count, Workspace<float>& ws) {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < count; ++s) {
        std::vector<float> buf(kCubeVoxels);
        set.fill(idx[s], buf.data());
        ws.load_input(s, buf.data());
    }
}

}  // namespace

EvalResult evaluate(const ScnModel& model, const SampleSet& samples, double threshold,
                    std::vector<double>* probs_out) {
    const size_t n = samples.size();
    if (n == 0) throw std::invalid_argument("evaluate: empty sample set");

    Workspace<float> ws;
    ContingencyTable table;
    double loss_sum = 0.0;
    if (probs_out) {
        probs_out->clear();
        probs_out->reserve(n);
    }

    const int chunk = model.config.batch_size;
    std::vector<size_t> idx;
    std::vector<uint8_t> labels;
    for (size_t start = 0; start < n; start += static_cast<size_t>(chunk)) {
        const int count = static_cast<int>(std::min<size_t>(chunk, n - start));
        ws.ensure(model.config, count);
        idx.resize(static_cast<size_t>(count));
        labels.resize(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i) {
            idx[static_cast<size_t>(i)] = start + static_cast<size_t>(i);
            labels[static_cast<size_t>(i)] = samples.label(start + static_cast<size_t>(i));
        }
        load_batch(samples, idx.data(), count, ws);
        forward_batch(model, ws);
        loss_sum += batch_loss(model, ws, labels.data()) * count;

        for (int i = 0; i < count; ++i) {
            const double p1 = ws.probs[static_cast<size_t>(i) * 2 + 1];
            if (probs_out) probs_out->push_back(p1);
            const bool pred = p1 > threshold;
            const bool obs = labels[static_cast<size_t>(i)] != 0;
            if (pred && obs)
                ++table.hits;
            else if (!pred && obs)
                ++table.misses;
            else if (pred && !obs)
                ++table.false_alarms;
            else
                ++table.correct_nulls;
        }
    }

    EvalResult r;
    r.loss = loss_sum / static_cast<double>(n);
    r.table = table;
    r.csi = csi(table);
    r.pod = pod(table);
    r.far = far(table);
    return r;
}

std::pair<ScnModel, TrainHistory> train(const SampleSet& train_set, const SampleSet& eval_set,
                                        const ScnConfig& config) {
    config.validate();
    if (train_set.size() == 0 || eval_set.size() == 0)
        throw std::invalid_argument("train: empty train or eval set");

    ScnModel model = init_model<float>(config);
    Rng rng(derive_seed(config.seed, 1));  // init consumed the raw seed stream

    Workspace<float> ws;
    ModelGrads<float> grads;
    grads.match(model);

    ScnModel best = model;
    Score best_csi;
    bool have_checkpoint = false;

    TrainHistory history;
    std::vector<size_t> idx(static_cast<size_t>(config.batch_size));
    std::vector<uint8_t> labels(static_cast<size_t>(config.batch_size));

    for (int64_t it = 1; it <= config.iterations; ++it) {
        for (int i = 0; i < config.batch_size; ++i) {
            idx[static_cast<size_t>(i)] = static_cast<size_t>(rng.uniform_index(train_set.size()));
            labels[static_cast<size_t>(i)] = train_set.label(idx[static_cast<size_t>(i)]);
        }
        ws.ensure(config, config.batch_size);
        load_batch(train_set, idx.data(), config.batch_size, ws);
        const double loss = loss_and_grad(model, ws, labels.data(), grads);
        if (!std::isfinite(loss)) throw std::runtime_error("train: loss diverged");
        sgd_step(model, grads, config.learning_rate);

        if (it % config.eval_every == 0) {
            const EvalResult ev = evaluate(model, eval_set);
            history.records.push_back({it, ev.loss, ev.csi, ev.pod, ev.far});
            const bool better = !have_checkpoint ||
                                (ev.csi.has_value() &&
                                 (!best_csi.has_value() || *ev.csi > *best_csi));
            if (better) {
                best = model;
                best_csi = ev.csi;
                have_checkpoint = true;
            }
        }
    }

    // With no eval point (iterations < eval_every) the final weights stand.
    if (!have_checkpoint) best = model;
    return {std::move(best), std::move(history)};
}

}  // namespace scn
