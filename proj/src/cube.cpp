#include "scn/cube.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "scn/rng.hpp"

namespace scn {

GriddedField temporal_diff(const GriddedField& curr, const GriddedField& prev,
                           int64_t expected_gap) {
    if (curr.var != prev.var) throw std::invalid_argument("temporal_diff: variable mismatch");
    if (!curr.dims_match(prev)) throw std::invalid_argument("temporal_diff: dims mismatch");
    if (curr.timestamp - prev.timestamp != expected_gap)
        throw std::invalid_argument("temporal_diff: frames are not consecutive");

    GriddedField out(curr.var, curr.timestamp, curr.levels, curr.rows, curr.cols);
    for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = curr.values[i] - prev.values[i];
    return out;
}

void extract_window(const GriddedField& field, const DomainGrid& grid, int cell_row, int cell_col,
                    float* dst) {
    if (cell_row < 0 || cell_row >= grid.cell_rows || cell_col < 0 || cell_col >= grid.cell_cols)
        throw std::out_of_range("extract_window: cell out of bounds");
    if (field.levels != grid.levels || field.rows != grid.pixel_rows() ||
        field.cols != grid.pixel_cols())
        throw std::invalid_argument("extract_window: field does not match grid");
    if (grid.levels != kCubeSlices)
        throw std::invalid_argument("extract_window: cube geometry requires 20 levels");

    const int px = grid.pixels_per_cell_side;
    const int y0 = cell_row * px - kWindowBorder;
    const int x0 = cell_col * px - kWindowBorder;

    for (int l = 0; l < kCubeSlices; ++l) {
        const float* lv = field.level(l);
        for (int wy = 0; wy < kCubeSide; ++wy) {
            float* drow = dst + (static_cast<size_t>(l) * kCubeSide + wy) * kCubeSide;
            const int fy = y0 + wy;
            if (fy < 0 || fy >= field.rows) {
                std::memset(drow, 0, kCubeSide * sizeof(float));
                continue;
            }
            // Clip the window row to the domain, zero-fill the rest.
            const int lo = std::max(0, -x0);
            const int hi = std::min(kCubeSide, field.cols - x0);
            if (lo > 0) std::memset(drow, 0, static_cast<size_t>(lo) * sizeof(float));
            if (hi < kCubeSide)
                std::memset(drow + std::max(lo, hi), 0,
                            static_cast<size_t>(kCubeSide - std::max(lo, hi)) * sizeof(float));
            if (hi > lo)
                std::memcpy(drow + lo, lv + static_cast<size_t>(fy) * field.cols + x0 + lo,
                            static_cast<size_t>(hi - lo) * sizeof(float));
        }
    }
}

uint8_t label_cell(const GriddedField& future_r, const DomainGrid& grid, int cell_row,
                   int cell_col) {
    if (cell_row < 0 || cell_row >= grid.cell_rows || cell_col < 0 || cell_col >= grid.cell_cols)
        throw std::out_of_range("label_cell: cell out of bounds");
    const int px = grid.pixels_per_cell_side;
    const int y0 = cell_row * px;
    const int x0 = cell_col * px;
    for (int l = 0; l < future_r.levels; ++l) {
        for (int y = y0; y < y0 + px; ++y) {
            const float* row = future_r.level(l) + static_cast<size_t>(y) * future_r.cols;
            for (int x = x0; x < x0 + px; ++x)
                if (row[x] > kStormThresholdDbz) return 1;
        }
    }
    return 0;
}

int eligible_issue_times(const EventSeries& series) {
    return std::max(0, static_cast<int>(series.frames.size()) - 3);
}

std::vector<SampleRef> build_sample_refs(const EventSeries& series, int32_t event_index) {
    if (series.frames.size() < 4)
        throw std::invalid_argument("build_sample_refs: series needs at least 4 frames");
    if (series.grid.levels != kCubeSlices)
        throw std::invalid_argument("build_sample_refs: series must have 20 levels");

    std::vector<SampleRef> refs;
    refs.reserve(static_cast<size_t>(eligible_issue_times(series)) * series.grid.cell_rows *
                 series.grid.cell_cols);
    const int n = static_cast<int>(series.frames.size());
    for (int t = 1; t + 2 < n; ++t) {
        const GriddedField& future_r = series.frames[t + 2].r;
        for (int r = 0; r < series.grid.cell_rows; ++r)
            for (int c = 0; c < series.grid.cell_cols; ++c) {
                SampleRef ref;
                ref.event = event_index;
                ref.time_idx = t;
                ref.cell_row = static_cast<int16_t>(r);
                ref.cell_col = static_cast<int16_t>(c);
                ref.label = label_cell(future_r, series.grid, r, c);
                refs.push_back(ref);
            }
    }
    return refs;
}

void materialize_cube(const EventSeries& series, const SampleRef& ref, float* dst) {
    const int t = ref.time_idx;
    if (t < 1 || t + 2 >= static_cast<int>(series.frames.size()))
        throw std::out_of_range("materialize_cube: issue time not eligible");
    const Frame& curr = series.frames[t];
    const Frame& prev = series.frames[t - 1];

    constexpr size_t plane = static_cast<size_t>(kCubeSlices) * kCubeSide * kCubeSide;
    const Var vars[3] = {Var::W, Var::Byc, Var::R};
    for (int v = 0; v < 3; ++v) {
        float* value_ch = dst + static_cast<size_t>(2 * v) * plane;
        float* diff_ch = dst + static_cast<size_t>(2 * v + 1) * plane;
        extract_window(curr.field(vars[v]), series.grid, ref.cell_row, ref.cell_col, value_ch);
        extract_window(prev.field(vars[v]), series.grid, ref.cell_row, ref.cell_col, diff_ch);
        // Window of the pointwise difference == difference of windows
        // (zero-fill included), so the diff channel is built in place.
        for (size_t i = 0; i < plane; ++i) diff_ch[i] = value_ch[i] - diff_ch[i];
    }
}

std::vector<SampleCube> build_samples(const EventSeries& series) {
    std::vector<SampleRef> refs = build_sample_refs(series);
    std::vector<SampleCube> out(refs.size());
    for (size_t i = 0; i < refs.size(); ++i) {
        SampleCube& s = out[i];
        s.data.resize(kCubeVoxels);
        materialize_cube(series, refs[i], s.data.data());
        s.label = refs[i].label;
        s.cell_row = refs[i].cell_row;
        s.cell_col = refs[i].cell_col;
        s.issue_time = series.frames[refs[i].time_idx].timestamp;
        s.event_id = series.id;
    }
    return out;
}

namespace {

constexpr size_t kChannelVoxels = static_cast<size_t>(kCubeSlices) * kCubeSide * kCubeSide;

struct NormAccum {
    std::array<double, kCubeChannels> sum{};
    std::array<double, kCubeChannels> sumsq{};
    size_t count_per_channel = 0;

    void add_cube(const float* data) {
        for (int c = 0; c < kCubeChannels; ++c) {
            const float* ch = data + c * kChannelVoxels;
            double s = 0.0, s2 = 0.0;
            for (size_t i = 0; i < kChannelVoxels; ++i) {
                const double v = ch[i];
                s += v;
                s2 += v * v;
            }
            sum[c] += s;
            sumsq[c] += s2;
        }
        count_per_channel += kChannelVoxels;
    }

    NormStats finish() const {
        if (count_per_channel == 0) throw std::invalid_argument("fit_norm: empty training set");
        NormStats stats;
        for (int c = 0; c < kCubeChannels; ++c) {
            const double n = static_cast<double>(count_per_channel);
            const double mean = sum[c] / n;
            const double var = std::max(0.0, sumsq[c] / n - mean * mean);
            const double sd = std::sqrt(var);
            stats.mean[c] = mean;
            if (sd < 1e-12) {
                stats.stddev[c] = 1.0;
                stats.degenerate[c] = true;
            } else {
                stats.stddev[c] = sd;
            }
        }
        return stats;
    }
};

}  // namespace

NormStats fit_norm(const std::vector<SampleCube>& train) {
    NormAccum acc;
    for (const SampleCube& s : train) acc.add_cube(s.data.data());
    return acc.finish();
}

NormStats fit_norm(const std::vector<EventSeries>& events, const std::vector<SampleRef>& train) {
    NormAccum acc;
    std::vector<float> buf(kCubeVoxels);
    for (const SampleRef& ref : train) {
        materialize_cube(events.at(static_cast<size_t>(ref.event)), ref, buf.data());
        acc.add_cube(buf.data());
    }
    return acc.finish();
}

void apply_norm(float* cube_data, const NormStats& stats) {
    for (int c = 0; c < kCubeChannels; ++c) {
        const float mean = static_cast<float>(stats.mean[c]);
        const float inv = static_cast<float>(1.0 / stats.stddev[c]);
        float* ch = cube_data + c * kChannelVoxels;
        for (size_t i = 0; i < kChannelVoxels; ++i) ch[i] = (ch[i] - mean) * inv;
    }
}

void apply_norm(SampleCube& sample, const NormStats& stats) {
    apply_norm(sample.data.data(), stats);
}

void apply_norm(std::vector<SampleCube>& samples, const NormStats& stats) {
    for (SampleCube& s : samples) apply_norm(s, stats);
}

std::vector<FoldSplit> kfold_split(size_t n_samples, int k, uint64_t seed) {
    if (k < 2) throw std::invalid_argument("kfold_split: k must be >= 2");
    if (static_cast<size_t>(k) > n_samples)
        throw std::invalid_argument("kfold_split: more folds than samples");

    std::vector<size_t> order(n_samples);
    for (size_t i = 0; i < n_samples; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<FoldSplit> folds(static_cast<size_t>(k));
    size_t start = 0;
    for (int f = 0; f < k; ++f) {
        const size_t size = n_samples / k + (static_cast<size_t>(f) < n_samples % k ? 1 : 0);
        FoldSplit& fold = folds[static_cast<size_t>(f)];
        fold.test.assign(order.begin() + start, order.begin() + start + size);
        fold.train.reserve(n_samples - size);
        fold.train.insert(fold.train.end(), order.begin(), order.begin() + start);
        fold.train.insert(fold.train.end(), order.begin() + start + size, order.end());
        start += size;
    }
    return folds;
}

FoldSplit holdout_split(const std::vector<SampleRef>& samples,
                        const std::vector<std::string>& event_ids,
                        const std::vector<std::string>& train_events,
                        const std::vector<std::string>& test_events) {
    for (const std::string& tr : train_events)
        for (const std::string& te : test_events)
            if (tr == te)
                throw std::invalid_argument("holdout_split: event '" + tr +
                                            "' in both train and test");
    auto index_of = [&](const std::string& id) {
        for (size_t i = 0; i < event_ids.size(); ++i)
            if (event_ids[i] == id) return static_cast<int32_t>(i);
        throw std::invalid_argument("holdout_split: unknown event id '" + id + "'");
    };
    std::vector<int32_t> train_idx, test_idx;
    for (const std::string& id : train_events) train_idx.push_back(index_of(id));
    for (const std::string& id : test_events) test_idx.push_back(index_of(id));

    FoldSplit out;
    for (size_t i = 0; i < samples.size(); ++i) {
        const int32_t ev = samples[i].event;
        if (std::find(train_idx.begin(), train_idx.end(), ev) != train_idx.end())
            out.train.push_back(i);
        else if (std::find(test_idx.begin(), test_idx.end(), ev) != test_idx.end())
            out.test.push_back(i);
    }
    return out;
}

std::vector<FoldSplit> split(const std::vector<SampleRef>& samples,
                             const std::vector<std::string>& event_ids, const SplitPlan& plan) {
    if (plan.mode == SplitPlan::Mode::KFold) return kfold_split(samples.size(), plan.k, plan.seed);
    return {holdout_split(samples, event_ids, plan.train_events, plan.test_events)};
}

std::string manifest_line(const EventSeries& series, const SampleRef& ref) {
    return series.id + "," + std::to_string(series.frames[ref.time_idx].timestamp) + "," +
           std::to_string(ref.cell_row) + "," + std::to_string(ref.cell_col) + "," +
           std::to_string(static_cast<int>(ref.label));
}

}  // namespace scn
