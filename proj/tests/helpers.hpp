#pragma once

#include <random>
#include <string>

#include "cartanlab/matrix.hpp"

namespace testing {

inline cartanlab::IntMatrix example_a() { return cartanlab::int_matrix({{3, 2, 1}, {2, 2, 1}, {1, 1, 1}}); }
inline cartanlab::IntMatrix example_b() { return cartanlab::int_matrix({{2, 1, 1}, {1, 2, 0}, {1, 0, 1}}); }

inline std::string data_path(const std::string& name) { return std::string(CARTANLAB_DATA_DIR) + "/" + name; }

inline cartanlab::IntMatrix random_int_matrix(std::mt19937_64& rng, std::size_t d, long lo, long hi) {
  cartanlab::IntMatrix m(d);
  std::uniform_int_distribution<long> dist(lo, hi);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace testing
