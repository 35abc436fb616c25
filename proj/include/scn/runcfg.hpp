#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scn/cube.hpp"
#include "scn/grid.hpp"
#include "scn/net.hpp"

namespace scn {

// Declarative run configuration, read from a flat "key = value" text file
// with dotted section prefixes (e.g. "net.learning_rate = 0.001", '#'
// comments). Unknown keys are rejected. Relative paths are resolved under
// the output directory at command start.
struct RunConfig {
    std::string data_dir = "events";
    std::string model_path = "model.scn1";

    DomainGrid grid;
    SynthParams synth;
    int n_events = 7;

    ScnConfig net;
    SplitPlan plan;
    int64_t eval_limit = 0;  // cap on eval-set size during training; 0 = all

    double threshold = 0.5;
    uint64_t seed = 0;

    void validate() const;
};

RunConfig parse_run_config(const std::filesystem::path& path);

// Parses a layer list of the form "cc3d:80:5x5:1,conv:128:5x5:2,...".
std::vector<LayerSpec> parse_layer_list(const std::string& text);

}  // namespace scn
