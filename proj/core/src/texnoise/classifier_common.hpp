#pragma once

#include <cmath>
#include <limits>

#include "texnoise/classifiers.hpp"
#include "texnoise/error.hpp"

namespace texnoise::classifiers::detail {

inline Matrix one_hot(std::span<const int> labels, Eigen::Index classes) {
  Matrix y = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), classes);
  for (std::size_t i = 0; i < labels.size(); ++i) y(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  return y;
}

/// Row-wise softmax in place; returns sum over rows of log-sum-exp.
inline double softmax_rows(Matrix& scores) {
  double total_lse = 0.0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double peak = scores.row(i).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index c = 0; c < scores.cols(); ++c) {
      const double e = std::exp(scores(i, c) - peak);
      scores(i, c) = e;
      sum += e;
    }
    scores.row(i) /= sum;
    total_lse += peak + std::log(sum);
  }
  return total_lse;
}

/// Index of the largest entry; ties go to the lowest index.
template <typename Row>
int argmax(const Row& row) {
  int best = 0;
  for (Eigen::Index c = 1; c < row.size(); ++c) {
    if (row(c) > row(best)) best = static_cast<int>(c);
  }
  return best;
}

inline Labels argmax_rows(const Matrix& scores) {
  Labels out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) out[static_cast<std::size_t>(i)] = argmax(scores.row(i));
  return out;
}

inline void require_trainable(const LabeledFeatures& data) {
  data.validate();
  if (data.size() == 0 || data.dimension() == 0) {
    throw Error(Errc::kEmptyInput, "training data is empty");
  }
  std::vector<bool> seen(static_cast<std::size_t>(data.num_classes()), false);
  int distinct = 0;
  for (const int label : data.labels) {
    if (!seen[static_cast<std::size_t>(label)]) {
      seen[static_cast<std::size_t>(label)] = true;
      ++distinct;
    }
  }
  if (distinct < 2) throw Error(Errc::kDegenerateData, "training data needs at least two classes");
}

inline void require_dimension(Eigen::Index expected, Eigen::Index actual) {
  if (expected != actual) {
    throw Error(Errc::kDimensionMismatch, "feature dimension " + std::to_string(actual) +
                                              " does not match the trained dimension " +
                                              std::to_string(expected));
  }
}

}  // namespace texnoise::classifiers::detail
