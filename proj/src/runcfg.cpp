#include "scn/runcfg.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scn {

namespace {

std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int64_t to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const int64_t r = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad integer for " + key + ": '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad number for " + key + ": '" + v + "'");
    }
}

uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const uint64_t r = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad unsigned integer for " + key + ": '" + v + "'");
    }
}

}  // namespace

std::vector<LayerSpec> parse_layer_list(const std::string& text) {
    std::vector<LayerSpec> layers;
    for (const std::string& item : split_list(text, ',')) {
        const std::vector<std::string> parts = split_list(item, ':');
        if (parts.size() != 4)
            throw std::runtime_error("config: layer spec must be kind:maps:KHxKW:stride, got '" +
                                     item + "'");
        LayerSpec ls;
        if (parts[0] == "cc3d")
            ls.kind = LayerKind::CrossChannel3D;
        else if (parts[0] == "conv")
            ls.kind = LayerKind::Conv2D;
        else
            throw std::runtime_error("config: unknown layer kind '" + parts[0] + "'");
        ls.out_maps = static_cast<int>(to_int("layer maps", parts[1]));
        const size_t x = parts[2].find('x');
        if (x == std::string::npos)
            throw std::runtime_error("config: kernel must be KHxKW, got '" + parts[2] + "'");
        ls.kh = static_cast<int>(to_int("kernel", parts[2].substr(0, x)));
        ls.kw = static_cast<int>(to_int("kernel", parts[2].substr(x + 1)));
        ls.stride = static_cast<int>(to_int("stride", parts[3]));
        layers.push_back(ls);
    }
    if (layers.empty()) throw std::runtime_error("config: empty layer list");
    return layers;
}

RunConfig parse_run_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path.string());

    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) + " has no '='");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "paths.data_dir") cfg.data_dir = val;
        else if (key == "paths.model") cfg.model_path = val;
        else if (key == "grid.cell_rows") cfg.grid.cell_rows = static_cast<int>(to_int(key, val));
        else if (key == "grid.cell_cols") cfg.grid.cell_cols = static_cast<int>(to_int(key, val));
        else if (key == "grid.levels") cfg.grid.levels = static_cast<int>(to_int(key, val));
        else if (key == "gen.n_events") cfg.n_events = static_cast<int>(to_int(key, val));
        else if (key == "synth.n_frames") cfg.synth.n_frames = static_cast<int>(to_int(key, val));
        else if (key == "synth.storms_min") cfg.synth.storms_min = static_cast<int>(to_int(key, val));
        else if (key == "synth.storms_max") cfg.synth.storms_max = static_cast<int>(to_int(key, val));
        else if (key == "synth.scale_min_km") cfg.synth.scale_min_km = to_double(key, val);
        else if (key == "synth.scale_max_km") cfg.synth.scale_max_km = to_double(key, val);
        else if (key == "synth.advect_min_kmpf") cfg.synth.advect_min_kmpf = to_double(key, val);
        else if (key == "synth.advect_max_kmpf") cfg.synth.advect_max_kmpf = to_double(key, val);
        else if (key == "synth.growth_rate") cfg.synth.growth_rate = to_double(key, val);
        else if (key == "synth.decay_rate") cfg.synth.decay_rate = to_double(key, val);
        else if (key == "synth.target_pos_fraction") cfg.synth.target_pos_fraction = to_double(key, val);
        else if (key == "net.layers") cfg.net.layers = parse_layer_list(val);
        else if (key == "net.learning_rate") cfg.net.learning_rate = to_double(key, val);
        else if (key == "net.batch_size") cfg.net.batch_size = static_cast<int>(to_int(key, val));
        else if (key == "net.iterations") cfg.net.iterations = to_int(key, val);
        else if (key == "net.eval_every") cfg.net.eval_every = to_int(key, val);
        else if (key == "net.class_weight0") cfg.net.class_weight0 = to_double(key, val);
        else if (key == "net.class_weight1") cfg.net.class_weight1 = to_double(key, val);
        else if (key == "split.mode") {
            if (val == "kfold") cfg.plan.mode = SplitPlan::Mode::KFold;
            else if (val == "holdout") cfg.plan.mode = SplitPlan::Mode::EventHoldout;
            else throw std::runtime_error("config: split.mode must be kfold or holdout");
        }
        else if (key == "split.k") cfg.plan.k = static_cast<int>(to_int(key, val));
        else if (key == "split.train_events") cfg.plan.train_events = split_list(val, ',');
        else if (key == "split.test_events") cfg.plan.test_events = split_list(val, ',');
        else if (key == "train.eval_limit") cfg.eval_limit = to_int(key, val);
        else if (key == "threshold") cfg.threshold = to_double(key, val);
        else if (key == "seed") cfg.seed = to_u64(key, val);
        else throw std::runtime_error("config: unknown key '" + key + "'");
    }

    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    grid.validate();
    synth.validate();
    net.validate();
    if (n_events < 1) throw std::runtime_error("config: gen.n_events must be >= 1");
    if (threshold < 0.0 || threshold > 1.0)
        throw std::runtime_error("config: threshold must be in [0, 1]");
    if (eval_limit < 0) throw std::runtime_error("config: train.eval_limit must be >= 0");
    if (data_dir.empty() || model_path.empty())
        throw std::runtime_error("config: paths must be non-empty");
}

}  // namespace scn
