#pragma once

#include <cstdint>
#include <vector>

#include "warplag/chart.hpp"

namespace warplag {

/// Low-discrepancy interior points of a box: a Kronecker sequence with
/// quadratic-irrational strides, shifted by a seed-derived offset and mapped
/// into the box with a 5% margin so every point is strictly interior.
std::vector<std::vector<double>> sample_box(const Box& box, std::size_t count,
                                            std::uint64_t seed);

/// Same sequence on the unit cube [0,1)^dim, no margin.
std::vector<std::vector<double>> sample_unit(std::size_t dim, std::size_t count,
                                             std::uint64_t seed);

} // namespace warplag
