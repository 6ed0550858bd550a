#include "catalog_data.hpp"

namespace tconnect::data {

// Placeholder; real adjacency filled in by the gadget search.
const int georges50_edges[][2] = {{0, 0}};
const std::size_t georges50_edge_count = 0;

const int ellingham_horton54_edges[][2] = {{0, 0}};
const std::size_t ellingham_horton54_edge_count = 0;

const int ellingham_horton78_edges[][2] = {{0, 0}};
const std::size_t ellingham_horton78_edge_count = 0;

}  // namespace tconnect::data
