#pragma once

#include <cstdint>
#include <vector>

#include "lahreg/geom/point_cloud.hpp"
#include "lahreg/lsh/partition.hpp"

namespace lahreg::lsh {

// One window per occupied voxel of the given edge length; window ids follow
// lexicographic voxel-key order. Window sizes vary with occupancy.
std::vector<std::int64_t> voxel_partition(const geom::PointCloud& cloud, double voxel_edge);

// Greedy benchmark foil: repeatedly take the lowest-index unassigned point
// and its window_size-1 nearest unassigned neighbors. The final window is
// whatever non-adjacent leftovers remain, which is exactly the failure mode
// this partitioner is kept around to demonstrate. Quadratic cost.
std::vector<std::int64_t> knn_partition(const geom::PointCloud& cloud, std::int64_t window_size);

// Sort by Morton code on a depth-bit grid over the bounding box, then split
// uniformly like partition().
WindowPartition octree_zorder_partition(const geom::PointCloud& cloud, std::int64_t window_size,
                                        int depth);

// Bit-interleave of three grid coordinates (x lowest), depth bits each.
std::uint64_t morton_encode(std::uint64_t x, std::uint64_t y, std::uint64_t z, int depth);

}  // namespace lahreg::lsh
