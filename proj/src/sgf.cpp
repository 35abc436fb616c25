#include "scn/sgf.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "scn/binio.hpp"

namespace scn {

namespace fs = std::filesystem;

void write_field(const GriddedField& field, const fs::path& path) {
    if (field.levels < 1 || field.rows < 1 || field.cols < 1)
        throw std::invalid_argument("write_field: empty dims");
    if (field.values.size() != field.size())
        throw std::invalid_argument("write_field: value count does not match dims");
    if (field.timestamp < 0) throw std::invalid_argument("write_field: negative timestamp");
    field.validate_finite();  // reject NaN/Inf before any bytes are written

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_field: cannot open " + path.string());

    os.write("SGF1", 4);
    char name[8] = {};
    std::strncpy(name, var_name(field.var), sizeof(name) - 1);
    os.write(name, 8);
    put_u64(os, static_cast<uint64_t>(field.timestamp));
    put_u32(os, static_cast<uint32_t>(field.levels));
    put_u32(os, static_cast<uint32_t>(field.rows));
    put_u32(os, static_cast<uint32_t>(field.cols));
    put_f32_array(os, field.values.data(), field.values.size());
    os.flush();
    if (!os) throw std::runtime_error("write_field: I/O failure on " + path.string());
}

GriddedField read_field(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open " + path.string());

    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "SGF1", 4) != 0)
        throw std::runtime_error("read_field: bad magic in " + path.string());

    char name[9] = {};
    if (!is.read(name, 8)) throw std::runtime_error("read_field: truncated header");
    GriddedField f;
    f.var = var_from_name(name);
    f.timestamp = static_cast<int64_t>(get_u64(is));
    f.levels = static_cast<int>(get_u32(is));
    f.rows = static_cast<int>(get_u32(is));
    f.cols = static_cast<int>(get_u32(is));
    if (f.levels < 1 || f.rows < 1 || f.cols < 1)
        throw std::runtime_error("read_field: bad dims in " + path.string());

    const auto payload = static_cast<uint64_t>(fs::file_size(path)) - kSgfHeaderBytes;
    const uint64_t expected = static_cast<uint64_t>(f.size()) * 4;
    if (payload != expected) {
        std::ostringstream msg;
        msg << "read_field: payload is " << payload << " bytes, dims require " << expected
            << " (" << path.string() << ")";
        throw std::runtime_error(msg.str());
    }

    f.values.resize(f.size());
    get_f32_array(is, f.values.data(), f.values.size());
    f.validate_finite();
    return f;
}

std::string sgf_file_name(Var var, int64_t timestamp) {
    return std::string(var_name(var)) + "_" + std::to_string(timestamp) + ".sgf";
}

void write_series(const EventSeries& series, const fs::path& dir) {
    series.validate();
    fs::create_directories(dir);
    std::ofstream manifest(dir / "manifest.txt", std::ios::trunc);
    if (!manifest) throw std::runtime_error("write_series: cannot open manifest in " + dir.string());
    for (const Frame& fr : series.frames) {
        std::string wn = sgf_file_name(Var::W, fr.timestamp);
        std::string bn = sgf_file_name(Var::Byc, fr.timestamp);
        std::string rn = sgf_file_name(Var::R, fr.timestamp);
        write_field(fr.w, dir / wn);
        write_field(fr.byc, dir / bn);
        write_field(fr.r, dir / rn);
        manifest << wn << ' ' << bn << ' ' << rn << '\n';
    }
    manifest.flush();
    if (!manifest) throw std::runtime_error("write_series: manifest I/O failure");
}

EventSeries load_series(const fs::path& dir, int pixels_per_cell_side) {
    std::ifstream manifest(dir / "manifest.txt");
    if (!manifest) throw std::runtime_error("load_series: missing manifest in " + dir.string());

    EventSeries series;
    series.id = dir.filename().string();

    std::string line;
    while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string wn, bn, rn;
        if (!(ls >> wn >> bn >> rn))
            throw std::runtime_error("load_series: malformed manifest line '" + line + "'");
        Frame fr;
        fr.w = read_field(dir / wn);
        fr.byc = read_field(dir / bn);
        fr.r = read_field(dir / rn);
        fr.timestamp = fr.w.timestamp;
        series.frames.push_back(std::move(fr));
    }
    if (series.frames.empty()) throw std::runtime_error("load_series: empty series in " + dir.string());

    const GriddedField& first = series.frames.front().r;
    if (first.rows % pixels_per_cell_side != 0 || first.cols % pixels_per_cell_side != 0)
        throw std::runtime_error("load_series: pixel dims not divisible by cell size");
    series.grid.pixels_per_cell_side = pixels_per_cell_side;
    series.grid.cell_rows = first.rows / pixels_per_cell_side;
    series.grid.cell_cols = first.cols / pixels_per_cell_side;
    series.grid.levels = first.levels;
    if (series.frames.size() > 1)
        series.cadence = series.frames[1].timestamp - series.frames[0].timestamp;
    series.validate();
    return series;
}

}  // namespace scn
