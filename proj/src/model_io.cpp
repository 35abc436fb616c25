#include "scn/model_io.hpp"

#include <cstring>
#include <fstream>

#include "scn/binio.hpp"

namespace scn {

namespace fs = std::filesystem;

int64_t scn1_file_size(const ScnConfig& config) {
    return 4 + 4 + 4 + 17 * static_cast<int64_t>(config.layers.size()) +
           static_cast<int64_t>(kCubeChannels) * 16 + 4 * param_count(config);
}

void save_model(const ScnModel& model, const fs::path& path) {
    const ScnConfig& cfg = model.config;
    cfg.validate();
    if (cfg.input_channels != kCubeChannels || cfg.input_slices != kCubeSlices)
        throw std::invalid_argument("save_model: only standard cube geometry is serializable");
    for (size_t l = 0; l < cfg.layers.size(); ++l) {
        const LayerSpec& ls = cfg.layers[l];
        const size_t nw = static_cast<size_t>(ls.out_maps) * cfg.in_planes(l) * ls.kh * ls.kw;
        if (model.weights[l].size() != nw ||
            model.biases[l].size() != static_cast<size_t>(ls.out_maps))
            throw std::invalid_argument("save_model: weight shapes inconsistent with config");
    }

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("save_model: cannot open " + path.string());
    os.write("SCN1", 4);
    put_u32(os, 1);  // version
    put_u32(os, static_cast<uint32_t>(cfg.layers.size()));
    for (const LayerSpec& ls : cfg.layers) {
        os.put(static_cast<char>(ls.kind));
        put_u32(os, static_cast<uint32_t>(ls.out_maps));
        put_u32(os, static_cast<uint32_t>(ls.kh));
        put_u32(os, static_cast<uint32_t>(ls.kw));
        put_u32(os, static_cast<uint32_t>(ls.stride));
    }
    for (int c = 0; c < kCubeChannels; ++c) {
        put_f64(os, model.norm_stats.mean[c]);
        put_f64(os, model.norm_stats.stddev[c]);
    }
    for (size_t l = 0; l < cfg.layers.size(); ++l) {
        put_f32_array(os, model.weights[l].data(), model.weights[l].size());
        put_f32_array(os, model.biases[l].data(), model.biases[l].size());
    }
    os.flush();
    if (!os) throw std::runtime_error("save_model: I/O failure on " + path.string());
}

ScnModel load_model(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_model: cannot open " + path.string());

    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "SCN1", 4) != 0)
        throw std::runtime_error("load_model: bad magic in " + path.string());
    const uint32_t version = get_u32(is);
    if (version != 1) throw std::runtime_error("load_model: unsupported version");

    const uint32_t n_layers = get_u32(is);
    if (n_layers == 0 || n_layers > 64) throw std::runtime_error("load_model: bad layer count");

    ScnModel model;
    ScnConfig cfg;
    cfg.layers.clear();
    for (uint32_t l = 0; l < n_layers; ++l) {
        const int kind_byte = is.get();
        if (kind_byte == EOF) throw std::runtime_error("load_model: truncated layer table");
        if (kind_byte != 0 && kind_byte != 1) throw std::runtime_error("load_model: bad layer kind");
        LayerSpec ls;
        ls.kind = static_cast<LayerKind>(kind_byte);
        ls.out_maps = static_cast<int>(get_u32(is));
        ls.kh = static_cast<int>(get_u32(is));
        ls.kw = static_cast<int>(get_u32(is));
        ls.stride = static_cast<int>(get_u32(is));
        if (ls.out_maps < 1 || ls.out_maps > 1 << 20 || ls.kh < 1 || ls.kh > 99 || ls.kw < 1 ||
            ls.kw > 99)
            throw std::runtime_error("load_model: implausible layer shape");
        cfg.layers.push_back(ls);
    }
    cfg.validate();
    model.config = cfg;

    for (int c = 0; c < kCubeChannels; ++c) {
        model.norm_stats.mean[c] = get_f64(is);
        model.norm_stats.stddev[c] = get_f64(is);
        if (!(model.norm_stats.stddev[c] > 0))
            throw std::runtime_error("load_model: non-positive stddev in stats");
    }

    model.weights.resize(cfg.layers.size());
    model.biases.resize(cfg.layers.size());
    for (size_t l = 0; l < cfg.layers.size(); ++l) {
        const LayerSpec& ls = cfg.layers[l];
        model.weights[l].resize(static_cast<size_t>(ls.out_maps) * cfg.in_planes(l) * ls.kh *
                                ls.kw);
        model.biases[l].resize(static_cast<size_t>(ls.out_maps));
        try {
            get_f32_array(is, model.weights[l].data(), model.weights[l].size());
            get_f32_array(is, model.biases[l].data(), model.biases[l].size());
        } catch (const std::exception&) {
            throw std::runtime_error("load_model: truncated weights in " + path.string());
        }
    }
    if (is.peek() != EOF) throw std::runtime_error("load_model: trailing bytes in " + path.string());
    return model;
}

}  // namespace scn
