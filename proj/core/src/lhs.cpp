#include "stratmc/lhs.hpp"

#include <numeric>
#include <utility>
#include <vector>

#include "stratmc/error.hpp"
#include "stratmc/normal.hpp"

namespace stratmc {

linalg::Matrix lhs_normals(std::size_t n, std::size_t d, RandomStream& stream) {
  if (n == 0 || d == 0) throw Error(ErrorCode::InsufficientSamples, "lhs_normals needs n, d >= 1");
  linalg::Matrix out(n, d);
  std::vector<std::size_t> perm(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[stream.uniform_index(i + 1)]);
    for (std::size_t i = 0; i < n; ++i)
      out(i, j) = normal_inv_cdf((static_cast<double>(perm[i]) + stream.uniform()) * inv_n);
  }
  return out;
}

}  // namespace stratmc
