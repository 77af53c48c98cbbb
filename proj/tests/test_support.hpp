#pragma once

#include <random>
#include <vector>

#include "qma/quat_linalg.hpp"

namespace qma::test {

using qma::random_hyperhermitian;
using qma::random_positive_hyperhermitian;
using qma::random_quaternion;

inline std::vector<Complex> random_skew_rows(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<Complex> a(m * m, Complex(0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      a[i * m + j] = Complex(d(rng), d(rng));
      a[j * m + i] = -a[i * m + j];
    }
  }
  return a;
}

inline ComplexMatrix to_eigen(std::size_t m, const std::vector<Complex>& rows) {
  ComplexMatrix out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i * m + j];
  return out;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline double rel_diff(Complex a, Complex b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace qma::test
