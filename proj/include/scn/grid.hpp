#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scn {

// Physical variables carried on the grid: vertical velocity (m/s), buoyancy
// (retrieval units) and radar reflectivity (dBZ).
enum class Var : uint8_t { W = 0, Byc = 1, R = 2 };

inline const char* var_name(Var v) {
    switch (v) {
        case Var::W: return "W";
        case Var::Byc: return "BYC";
        case Var::R: return "R";
    }
    throw std::invalid_argument("unknown variable");
}

inline Var var_from_name(const std::string& s) {
    if (s == "W") return Var::W;
    if (s == "BYC") return Var::Byc;
    if (s == "R") return Var::R;
    throw std::runtime_error("unknown variable name '" + s + "'");
}

// Cell-based analysis domain. Cells are squares of pixels_per_cell_side^2
// pixels at 1 km per pixel; fields carry `levels` vertical slices.
struct DomainGrid {
    int cell_rows = 31;
    int cell_cols = 39;
    int pixels_per_cell_side = 6;
    int levels = 20;

    int pixel_rows() const { return cell_rows * pixels_per_cell_side; }
    int pixel_cols() const { return cell_cols * pixels_per_cell_side; }

    void validate() const {
        if (cell_rows < 1 || cell_cols < 1 || pixels_per_cell_side < 1 || levels < 1)
            throw std::invalid_argument("DomainGrid: all counts must be >= 1");
    }

    bool operator==(const DomainGrid&) const = default;
};

// One physical variable on the full 3D grid at one timestamp.
// Values are stored level-major, then row-major within a level.
struct GriddedField {
    Var var = Var::R;
    int64_t timestamp = 0;  // seconds since epoch
    int levels = 0;
    int rows = 0;
    int cols = 0;
    std::vector<float> values;

    GriddedField() = default;
    GriddedField(Var v, int64_t ts, int nlevels, int nrows, int ncols)
        : var(v), timestamp(ts), levels(nlevels), rows(nrows), cols(ncols),
          values(static_cast<size_t>(nlevels) * nrows * ncols, 0.0f) {}

    size_t size() const { return static_cast<size_t>(levels) * rows * cols; }

    float& at(int l, int y, int x) {
        return values[(static_cast<size_t>(l) * rows + y) * cols + x];
    }
    float at(int l, int y, int x) const {
        return values[(static_cast<size_t>(l) * rows + y) * cols + x];
    }

    const float* level(int l) const { return values.data() + static_cast<size_t>(l) * rows * cols; }

    bool dims_match(const GriddedField& o) const {
        return levels == o.levels && rows == o.rows && cols == o.cols;
    }

    // Fields must be finite everywhere; enforced on write and read.
    void validate_finite() const {
        for (float v : values)
            if (!std::isfinite(v)) throw std::runtime_error("GriddedField contains non-finite value");
    }
};

// One timestamp of the multi-source input: exactly one field per variable.
struct Frame {
    int64_t timestamp = 0;
    GriddedField w, byc, r;

    const GriddedField& field(Var v) const {
        switch (v) {
            case Var::W: return w;
            case Var::Byc: return byc;
            case Var::R: return r;
        }
        throw std::invalid_argument("unknown variable");
    }
};

// An ordered sequence of frames on a fixed grid with a fixed cadence.
struct EventSeries {
    std::string id;
    DomainGrid grid;
    int64_t cadence = 900;  // seconds between frames
    std::vector<Frame> frames;

    void validate() const {
        grid.validate();
        for (size_t i = 0; i < frames.size(); ++i) {
            const Frame& f = frames[i];
            if (f.w.timestamp != f.timestamp || f.byc.timestamp != f.timestamp ||
                f.r.timestamp != f.timestamp)
                throw std::runtime_error("EventSeries: frame field timestamps disagree");
            if (i > 0 && f.timestamp != frames[i - 1].timestamp + cadence)
                throw std::runtime_error("EventSeries: timestamps not an arithmetic progression");
            for (Var v : {Var::W, Var::Byc, Var::R}) {
                const GriddedField& g = f.field(v);
                if (g.levels != grid.levels || g.rows != grid.pixel_rows() ||
                    g.cols != grid.pixel_cols())
                    throw std::runtime_error("EventSeries: field dims do not match grid");
            }
        }
    }
};

// Synthetic event generator parameters. Storm counts, sizes and motion are
// ranges sampled per event; rates are in dBZ per frame.
struct SynthParams {
    int n_frames = 12;
    int storms_min = 7;
    int storms_max = 11;
    double scale_min_km = 4.0;
    double scale_max_km = 9.0;
    double advect_min_kmpf = 1.0;   // flow speed per frame
    double advect_max_kmpf = 4.0;
    double growth_rate = 14.0;      // dBZ per frame while growing
    double decay_rate = 11.0;       // dBZ per frame while decaying
    double target_pos_fraction = 0.05;
    uint64_t seed = 0;

    void validate() const {
        if (n_frames < 1) throw std::invalid_argument("SynthParams: n_frames must be >= 1");
        if (storms_min < 0 || storms_max < storms_min)
            throw std::invalid_argument("SynthParams: bad storm count range");
        if (scale_min_km <= 0 || scale_max_km < scale_min_km)
            throw std::invalid_argument("SynthParams: bad scale range");
        if (advect_min_kmpf < 0 || advect_max_kmpf < advect_min_kmpf)
            throw std::invalid_argument("SynthParams: bad advection range");
        if (growth_rate <= 0 || decay_rate <= 0)
            throw std::invalid_argument("SynthParams: rates must be positive");
        if (!(target_pos_fraction > 0.0 && target_pos_fraction < 0.5))
            throw std::invalid_argument("SynthParams: target_pos_fraction must be in (0, 0.5)");
    }
};

}  // namespace scn
