#include "scn/synth.hpp"

#include <algorithm>
#include <cmath>

#include "scn/rng.hpp"

namespace scn {

namespace {

constexpr int64_t kSeriesStart = 1000000000;  // arbitrary fixed epoch offset

// Storm lifecycle: linear ramp to peak, hold, linear decay. Amplitude in dBZ.
struct Storm {
    double birth;        // frame index (may be negative: already active at start)
    double peak_dbz;
    double grow_frames;
    double hold_frames;
    double decay_frames;
    double cy, cx;       // center at frame 0, in km (= pixels)
    double vy, vx;       // km per frame
    double sy, sx;       // Gaussian sigmas along rotated axes, km
    double cos_t, sin_t; // orientation

    double amplitude(double t) const {
        double u = t - birth;
        if (u <= 0) return 0.0;
        if (u < grow_frames) return peak_dbz * u / grow_frames;
        u -= grow_frames;
        if (u < hold_frames) return peak_dbz;
        u -= hold_frames;
        if (u < decay_frames) return peak_dbz * (1.0 - u / decay_frames);
        return 0.0;
    }
};

// Raised-cosine vertical weighting, 1 at `peak`, 0 beyond `halfwidth` levels.
double vertical_profile(int level, double peak, double halfwidth) {
    double u = (level - peak) / halfwidth;
    if (u <= -1.0 || u >= 1.0) return 0.0;
    return std::cos(1.5707963267948966 * u);
}

// Smooth 2D background noise: coarse lattice of uniform draws, bilinearly
// upsampled. Amplitude 1 (values in [-1, 1]).
void fill_smooth_noise(Rng& rng, int rows, int cols, int lattice_km, std::vector<float>& out) {
    const int cr = rows / lattice_km + 2;
    const int cc = cols / lattice_km + 2;
    std::vector<double> coarse(static_cast<size_t>(cr) * cc);
    for (double& v : coarse) v = rng.uniform(-1.0, 1.0);
    out.resize(static_cast<size_t>(rows) * cols);
    for (int y = 0; y < rows; ++y) {
        const double fy = static_cast<double>(y) / lattice_km;
        const int iy = static_cast<int>(fy);
        const double ty = fy - iy;
        for (int x = 0; x < cols; ++x) {
            const double fx = static_cast<double>(x) / lattice_km;
            const int ix = static_cast<int>(fx);
            const double tx = fx - ix;
            const double v00 = coarse[static_cast<size_t>(iy) * cc + ix];
            const double v01 = coarse[static_cast<size_t>(iy) * cc + ix + 1];
            const double v10 = coarse[static_cast<size_t>(iy + 1) * cc + ix];
            const double v11 = coarse[static_cast<size_t>(iy + 1) * cc + ix + 1];
            out[static_cast<size_t>(y) * cols + x] = static_cast<float>(
                (1 - ty) * ((1 - tx) * v00 + tx * v01) + ty * ((1 - tx) * v10 + tx * v11));
        }
    }
}

// Adds amp * G(p - c) * vprof(l) to `field`, evaluating the Gaussian only
// inside its 3-sigma bounding box.
void add_bump(GriddedField& field, double amp, double cy, double cx, double sy, double sx,
              double cos_t, double sin_t, double vprof_peak, double vprof_halfwidth) {
    if (amp == 0.0) return;
    const double reach = 3.0 * std::max(sy, sx);
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - reach)));
    const int y1 = std::min(field.rows - 1, static_cast<int>(std::ceil(cy + reach)));
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - reach)));
    const int x1 = std::min(field.cols - 1, static_cast<int>(std::ceil(cx + reach)));
    if (y0 > y1 || x0 > x1) return;

    for (int l = 0; l < field.levels; ++l) {
        const double vp = vertical_profile(l, vprof_peak, vprof_halfwidth);
        if (vp == 0.0) continue;
        const double a = amp * vp;
        for (int y = y0; y <= y1; ++y) {
            const double dy = y - cy;
            float* row = &field.at(l, y, x0);
            for (int x = x0; x <= x1; ++x) {
                const double dx = x - cx;
                const double u = (cos_t * dy + sin_t * dx) / sy;
                const double v = (-sin_t * dy + cos_t * dx) / sx;
                const double r2 = u * u + v * v;
                if (r2 < 9.0) row[x - x0] += static_cast<float>(a * std::exp(-0.5 * r2));
            }
        }
    }
}

}  // namespace

EventSeries synth_event(const DomainGrid& grid, const SynthParams& params,
                        const std::string& event_id) {
    grid.validate();
    params.validate();

    Rng rng(params.seed);
    const int rows = grid.pixel_rows();
    const int cols = grid.pixel_cols();

    // Event-level flow shared by all storms.
    const double flow_dir = rng.uniform(0.0, 6.283185307179586);
    const double flow_speed = rng.uniform(params.advect_min_kmpf, params.advect_max_kmpf);
    const double flow_vy = flow_speed * std::sin(flow_dir);
    const double flow_vx = flow_speed * std::cos(flow_dir);

    const int n_storms = static_cast<int>(rng.uniform_int(params.storms_min, params.storms_max));
    std::vector<Storm> storms(static_cast<size_t>(n_storms));
    for (Storm& s : storms) {
        s.peak_dbz = rng.uniform(44.0, 56.0);
        s.grow_frames = s.peak_dbz / params.growth_rate;
        s.hold_frames = rng.uniform(2.0, 6.0);
        s.decay_frames = s.peak_dbz / params.decay_rate;
        // Births spread so the series contains pre-existing storms, new
        // initiations, and storms that decay mid-series.
        s.birth = rng.uniform(-(s.grow_frames + s.hold_frames), params.n_frames - 2.0);
        s.cy = rng.uniform(0.0, rows);
        s.cx = rng.uniform(0.0, cols);
        s.vy = flow_vy + rng.uniform(-1.0, 1.0);
        s.vx = flow_vx + rng.uniform(-1.0, 1.0);
        s.sy = rng.uniform(params.scale_min_km, params.scale_max_km);
        s.sx = rng.uniform(params.scale_min_km, params.scale_max_km);
        const double theta = rng.uniform(0.0, 3.141592653589793);
        s.cos_t = std::cos(theta);
        s.sin_t = std::sin(theta);
    }

    EventSeries series;
    series.id = event_id;
    series.grid = grid;
    series.cadence = 900;

    std::vector<float> noise;
    for (int t = 0; t < params.n_frames; ++t) {
        Frame fr;
        fr.timestamp = kSeriesStart + static_cast<int64_t>(t) * series.cadence;
        fr.w = GriddedField(Var::W, fr.timestamp, grid.levels, rows, cols);
        fr.byc = GriddedField(Var::Byc, fr.timestamp, grid.levels, rows, cols);
        fr.r = GriddedField(Var::R, fr.timestamp, grid.levels, rows, cols);

        // Background: smooth horizontal noise modulated by a mild vertical
        // taper. Reflectivity background stays well below the 35 dBZ storm
        // threshold.
        struct Bg {
            Var var;
            double offset, amp, vprof_peak, vprof_halfwidth;
        };
        const Bg bgs[3] = {
            {Var::W, 0.0, 0.7, 10.0, 12.0},
            {Var::Byc, 0.0, 0.06, 4.0, 10.0},
            {Var::R, 6.0, 7.0, 6.0, 9.0},
        };
        for (const Bg& bg : bgs) {
            fill_smooth_noise(rng, rows, cols, 16, noise);
            GriddedField& f = (bg.var == Var::W) ? fr.w : (bg.var == Var::Byc) ? fr.byc : fr.r;
            for (int l = 0; l < grid.levels; ++l) {
                const double vm = 0.7 + 0.3 * vertical_profile(l, bg.vprof_peak, bg.vprof_halfwidth);
                float* dst = f.values.data() + static_cast<size_t>(l) * rows * cols;
                for (size_t i = 0; i < noise.size(); ++i)
                    dst[i] = static_cast<float>(bg.offset + bg.amp * vm * noise[i]);
            }
        }

        for (const Storm& s : storms) {
            const double a_now = s.amplitude(t);
            const double a_next = s.amplitude(t + 1.0);
            const double cy = s.cy + s.vy * t;
            const double cx = s.cx + s.vx * t;

            add_bump(fr.r, a_now, cy, cx, s.sy, s.sx, s.cos_t, s.sin_t, 6.0, 9.0);

            // Updraft and buoyancy: a sustained part proportional to current
            // intensity plus a growth part that precedes reflectivity gain.
            const double growth = std::max(0.0, a_next - a_now) / params.growth_rate;
            const double sustain = a_now / s.peak_dbz;
            const double w_amp = 7.0 * growth + 1.8 * sustain;
            const double b_amp = 0.55 * growth + 0.14 * sustain;
            add_bump(fr.w, w_amp, cy, cx, 0.85 * s.sy, 0.85 * s.sx, s.cos_t, s.sin_t, 10.0, 12.0);
            add_bump(fr.byc, b_amp, cy, cx, 0.9 * s.sy, 0.9 * s.sx, s.cos_t, s.sin_t, 4.0, 10.0);
        }

        series.frames.push_back(std::move(fr));
    }

    series.validate();
    return series;
}

}  // namespace scn
