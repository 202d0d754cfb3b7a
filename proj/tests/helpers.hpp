#pragma once

#include <random>

#include "agc/matrix.hpp"
#include "oracles.hpp"

namespace testing_util {

inline oracle::Dense to_dense(const agc::Mat& m) {
  oracle::Dense d(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
  return d;
}

inline agc::Mat random_binary(std::size_t k, std::size_t r, double p, std::mt19937_64& gen) {
  std::bernoulli_distribution coin(p);
  agc::Mat m(k, r);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < r; ++j) m(i, j) = coin(gen) ? 1.0 : 0.0;
  return m;
}

inline agc::Mat random_gaussian(std::size_t k, std::size_t r, std::mt19937_64& gen) {
  std::normal_distribution<double> z;
  agc::Mat m(k, r);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < r; ++j) m(i, j) = z(gen);
  return m;
}

}  // namespace testing_util
