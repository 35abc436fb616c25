#pragma once

#include <vector>

#include "scn/cube.hpp"
#include "scn/grid.hpp"

namespace scn {

// Read access to normalized sample cubes. Implementations must be safe for
// concurrent fill() calls on distinct destinations.
class SampleSet {
public:
    virtual ~SampleSet() = default;
    virtual size_t size() const = 0;
    virtual void fill(size_t idx, float* dst) const = 0;  // kCubeVoxels floats
    virtual uint8_t label(size_t idx) const = 0;
};

// Holds materialized cubes (desk-scale sets, unit tests).
class MemorySampleSet : public SampleSet {
public:
    explicit MemorySampleSet(std::vector<SampleCube> samples) : samples_(std::move(samples)) {}

    size_t size() const override { return samples_.size(); }
    void fill(size_t idx, float* dst) const override {
        const SampleCube& s = samples_[idx];
        std::copy(s.data.begin(), s.data.end(), dst);
    }
    uint8_t label(size_t idx) const override { return samples_[idx].label; }

    const std::vector<SampleCube>& samples() const { return samples_; }

private:
    std::vector<SampleCube> samples_;
};

// Materializes cubes on demand from event series fields and applies the
// given normalization; storage stays linear in fields, not samples.
class LazySampleSet : public SampleSet {
public:
    LazySampleSet(const std::vector<EventSeries>& events, std::vector<SampleRef> refs,
                  const NormStats& stats)
        : events_(&events), refs_(std::move(refs)), stats_(stats) {}

    size_t size() const override { return refs_.size(); }
    void fill(size_t idx, float* dst) const override {
        const SampleRef& ref = refs_[idx];
        materialize_cube((*events_)[static_cast<size_t>(ref.event)], ref, dst);
        apply_norm(dst, stats_);
    }
    uint8_t label(size_t idx) const override { return refs_[idx].label; }

    const std::vector<SampleRef>& refs() const { return refs_; }

private:
    const std::vector<EventSeries>* events_;
    std::vector<SampleRef> refs_;
    NormStats stats_;
};

}  // namespace scn
