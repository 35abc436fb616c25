#pragma once

#include "scn/grid.hpp"

namespace scn {

// Generates a deterministic synthetic event: advecting anisotropic storm
// bumps in reflectivity over smooth low-amplitude background noise, with
// vertical velocity and buoyancy bumps that lead reflectivity growth by one
// frame (so storm initiation and growth are predictable from W/BYC before R
// crosses the storm threshold).
//
// Pure function of (grid, params): identical arguments give a bit-identical
// series.
EventSeries synth_event(const DomainGrid& grid, const SynthParams& params,
                        const std::string& event_id = "event");

}  // namespace scn
