#pragma once

#include <cstddef>

namespace tconnect::data {

// Stored adjacency for the three large catalogued base graphs, as flat
// (u, v) pairs. Definitions live in catalog_data.cpp.
extern const int georges50_edges[][2];
extern const std::size_t georges50_edge_count;

extern const int ellingham_horton54_edges[][2];
extern const std::size_t ellingham_horton54_edge_count;

extern const int ellingham_horton78_edges[][2];
extern const std::size_t ellingham_horton78_edge_count;

}  // namespace tconnect::data
