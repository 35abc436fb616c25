#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scn {

// Compares every parameter's backpropagated gradient against 64-bit central
// finite differences on a small random configuration.
struct GradCheckCase {
    std::string name;
    size_t n_params = 0;
    double max_rel_err = 0.0;
};

struct GradCheckReport {
    std::vector<GradCheckCase> cases;
    double max_rel_err = 0.0;

    bool pass(double tol = 1e-4) const { return max_rel_err < tol; }
};

// Runs the standard battery (five configurations, each with the
// cross-channel first layer, mixed strides/kernels/class weights).
GradCheckReport run_gradient_checks(uint64_t seed = 7);

// Verifies that the fused 5x5 stride-2 convolution reproduces the 4x4
// stride-1 convolution + 2x2 average-pool pipeline on random inputs, and
// reports the MAC savings of the fused form at the default layer width.
struct FusionReport {
    double max_abs_diff = 0.0;  // over all trials, fused vs conv+pool
    double savings = 0.0;       // fused_savings(4, 128, 128, 18, 18)
};

FusionReport run_fusion_check(uint64_t seed = 11, int trials = 100);

}  // namespace scn
