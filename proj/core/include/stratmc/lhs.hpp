#pragma once

#include <cstddef>

#include "stratmc/linalg.hpp"
#include "stratmc/random.hpp"

namespace stratmc {

/// n x d matrix of standard normals where every column places exactly one
/// sample in each of the n equiprobable cells. Column permutations are drawn
/// independently.
linalg::Matrix lhs_normals(std::size_t n, std::size_t d, RandomStream& stream);

}  // namespace stratmc
