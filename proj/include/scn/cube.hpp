#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scn/grid.hpp"

namespace scn {

// Cube geometry is fixed by the sampling scheme: six channels in the order
// (w, dw, byc, dbyc, R, dR), all vertical levels of an 18x18 km window
// centered on the forecast cell.
inline constexpr int kCubeChannels = 6;
inline constexpr int kCubeSlices = 20;
inline constexpr int kCubeSide = 18;
inline constexpr int kWindowBorder = 6;  // pixels beyond the 6x6 cell block
inline constexpr float kStormThresholdDbz = 35.0f;
inline constexpr int64_t kLeadSeconds = 1800;  // verification horizon: t + 30 min

inline constexpr size_t kCubeVoxels =
    static_cast<size_t>(kCubeChannels) * kCubeSlices * kCubeSide * kCubeSide;

// One labeled training instance.
struct SampleCube {
    std::vector<float> data;  // [channel][slice][row][col], kCubeVoxels floats
    uint8_t label = 0;
    int cell_row = 0;
    int cell_col = 0;
    int64_t issue_time = 0;
    std::string event_id;

    float& at(int c, int s, int y, int x) {
        return data[((static_cast<size_t>(c) * kCubeSlices + s) * kCubeSide + y) * kCubeSide + x];
    }
    float at(int c, int s, int y, int x) const {
        return data[((static_cast<size_t>(c) * kCubeSlices + s) * kCubeSide + y) * kCubeSide + x];
    }
};

// Lightweight handle for a sample that is materialized on demand from its
// series (cube payloads are never stored in bulk).
struct SampleRef {
    int32_t event = 0;      // index into an event list
    int32_t time_idx = 0;   // issue frame index within the series
    int16_t cell_row = 0;
    int16_t cell_col = 0;
    uint8_t label = 0;
};

// Per-channel standardization statistics fitted on a training set.
struct NormStats {
    std::array<double, kCubeChannels> mean{};
    std::array<double, kCubeChannels> stddev{};
    std::array<bool, kCubeChannels> degenerate{};  // stddev was ~0, replaced by 1

    NormStats() {
        stddev.fill(1.0);
        degenerate.fill(false);
    }
};

// Dataset partitioning plan.
struct SplitPlan {
    enum class Mode { KFold, EventHoldout };
    Mode mode = Mode::KFold;
    int k = 5;
    uint64_t seed = 0;
    std::vector<std::string> train_events;
    std::vector<std::string> test_events;
};

struct FoldSplit {
    std::vector<size_t> train;
    std::vector<size_t> test;
};

// --- field-level operations -------------------------------------------------

// Pointwise difference curr - prev of two consecutive fields of the same
// variable; the result carries curr's timestamp.
GriddedField temporal_diff(const GriddedField& curr, const GriddedField& prev,
                           int64_t expected_gap = 900);

// Copies the 18x18-pixel window centered on the cell's 6x6 block (the block
// plus a 6-pixel border on each side), all levels, into `dst`
// ([kCubeSlices][kCubeSide][kCubeSide], slice-major). Pixels outside the
// domain are zero-filled.
void extract_window(const GriddedField& field, const DomainGrid& grid, int cell_row, int cell_col,
                    float* dst);

// 1 iff any of the cell's pixels at any level strictly exceeds 35 dBZ.
uint8_t label_cell(const GriddedField& future_r, const DomainGrid& grid, int cell_row,
                   int cell_col);

// --- sample construction ----------------------------------------------------

// Issue times need a predecessor frame (for temporal differences) and a
// +30 min successor (for the label): frames [1, n-3] of an n-frame series.
int eligible_issue_times(const EventSeries& series);

// Enumerates all (issue time, cell) samples with labels, time-major then
// row-major cells. `event_index` is recorded on each ref.
std::vector<SampleRef> build_sample_refs(const EventSeries& series, int32_t event_index = 0);

// Fills `dst` (kCubeVoxels floats) with the six-channel payload of one
// sample; no normalization.
void materialize_cube(const EventSeries& series, const SampleRef& ref, float* dst);

// Materialized sample list for a whole series (intended for desk-scale
// grids; large runs use refs + materialize_cube).
std::vector<SampleCube> build_samples(const EventSeries& series);

// --- normalization ----------------------------------------------------------

NormStats fit_norm(const std::vector<SampleCube>& train);

// Streaming variant over lazily materialized samples.
NormStats fit_norm(const std::vector<EventSeries>& events, const std::vector<SampleRef>& train);

void apply_norm(SampleCube& sample, const NormStats& stats);
void apply_norm(std::vector<SampleCube>& samples, const NormStats& stats);
void apply_norm(float* cube_data, const NormStats& stats);

// --- splitting ----------------------------------------------------------

// Seeded shuffle, then contiguous folds whose sizes differ by at most one.
// Entry i is the i-th fold used as the test set.
std::vector<FoldSplit> kfold_split(size_t n_samples, int k, uint64_t seed);

// Partition by originating event id; every id in the plan must exist.
FoldSplit holdout_split(const std::vector<SampleRef>& samples,
                        const std::vector<std::string>& event_ids,
                        const std::vector<std::string>& train_events,
                        const std::vector<std::string>& test_events);

// Dispatch on plan.mode; returns one FoldSplit per fold (KFold) or a single
// train/test partition (EventHoldout).
std::vector<FoldSplit> split(const std::vector<SampleRef>& samples,
                             const std::vector<std::string>& event_ids, const SplitPlan& plan);

// Samples manifest line: "event_id,issue_timestamp,cell_row,cell_col,label".
std::string manifest_line(const EventSeries& series, const SampleRef& ref);

}  // namespace scn
