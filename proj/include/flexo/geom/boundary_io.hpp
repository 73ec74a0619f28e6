#pragma once

#include <string>
#include <vector>

#include "flexo/geom/boundary_model.hpp"

namespace flexo::geom {

struct BoundaryFile {
    std::vector<BoundaryChain> chains;
    std::vector<CornerOverride> overrides;
};

/// Parse the plain-text boundary description. Grammar (one item per line,
/// '#' starts a comment):
///
///   chain
///     segment region=<name>
///       degree <d>
///       knots <k0> <k1> ...
///       cp <x> <y> <w>
///       ...
///     corner after=<j> [name=<str>]     # force a corner at junction j
///     nocorner after=<j>                # suppress corner detection there
///
/// Junction j sits between segment j and segment j+1 (cyclically) of the
/// current chain. Chains need not be oriented consistently; orientation is
/// normalized on load.
BoundaryFile parse_boundary_text(const std::string& text);

BoundaryModel load_boundary_file(const std::string& path, double corner_angle_tol = 1.0 * M_PI / 180.0);

std::string serialize_boundary(const BoundaryModel& model);

}  // namespace flexo::geom
