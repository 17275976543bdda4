#pragma once

#include "gplda/model.hpp"

#include <random>
#include <string>
#include <vector>

namespace test {

using gplda::Index;
using gplda::Matrix;
using gplda::Vector;

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

inline Matrix random_spd(std::mt19937_64& rng, Index p, double floor = 0.5) {
  const Matrix a = random_matrix(rng, p, p);
  return a * a.transpose() / static_cast<double>(p) + floor * Matrix::Identity(p, p);
}

inline Matrix random_psd(std::mt19937_64& rng, Index p, Index rank) {
  const Matrix a = random_matrix(rng, p, rank);
  return a * a.transpose();
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Smooth class curves plus unit noise; rows cycle through the classes.
inline gplda::LabeledFunctionalDataset random_dataset(std::mt19937_64& rng, Index n, Index p, int c,
                                                      double noise = 1.0) {
  std::normal_distribution<double> z(0.0, 1.0);
  Matrix y(n, p);
  std::vector<std::string> labels;
  for (Index i = 0; i < n; ++i) {
    const int k = static_cast<int>(i % c);
    labels.push_back("class" + std::to_string(k));
    for (Index j = 0; j < p; ++j) {
      y(i, j) = std::sin(3.0 * static_cast<double>(j) / static_cast<double>(p) * (k + 1)) + noise * z(rng);
    }
  }
  return gplda::validate_dataset(y, labels);
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace test
