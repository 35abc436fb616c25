#pragma once

#include <filesystem>
#include <string>

#include "scn/grid.hpp"

namespace scn {

// SGF1 field file, little-endian:
//   bytes  0- 3   magic "SGF1"
//   bytes  4-11   variable name, ASCII, zero-padded ("W", "BYC", "R")
//   bytes 12-19   timestamp, unsigned 64-bit
//   bytes 20-31   levels, pixel_rows, pixel_cols as unsigned 32-bit
//   payload       levels*rows*cols IEEE-754 32-bit floats,
//                 level-major then row-major
inline constexpr size_t kSgfHeaderBytes = 32;

// Writes `field` to `path`. The field is validated (finite values) before any
// bytes are written; round-trips bit-exactly through read_field.
void write_field(const GriddedField& field, const std::filesystem::path& path);

GriddedField read_field(const std::filesystem::path& path);

// Canonical file name for one field of a series: "<variable>_<timestamp>.sgf".
std::string sgf_file_name(Var var, int64_t timestamp);

// An EventSeries on disk is a directory of SGF1 files plus "manifest.txt"
// listing one frame per line: "<w-file> <byc-file> <r-file>" in time order.
void write_series(const EventSeries& series, const std::filesystem::path& dir);

// Loads a series directory; the series id is the directory name.
EventSeries load_series(const std::filesystem::path& dir, int pixels_per_cell_side = 6);

}  // namespace scn
