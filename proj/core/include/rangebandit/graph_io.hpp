#pragma once

#include <filesystem>
#include <iosfwd>

#include "rangebandit/spectral.hpp"

namespace rangebandit {

// Edge-list text: first line "K", then one "i j" pair per line, 0-indexed.
void write_edge_list(std::ostream& out, const GraphSpec& g);
GraphSpec read_edge_list(std::istream& in);

void save_edge_list(const std::filesystem::path& path, const GraphSpec& g);
GraphSpec load_edge_list(const std::filesystem::path& path);

}  // namespace rangebandit
