#include "texnoise/classifiers.hpp"
#include "texnoise/error.hpp"

namespace texnoise::classifiers {

Standardizer Standardizer::fit(const FeatureMatrix& features) {
  if (features.rows() == 0) throw Error(Errc::kEmptyInput, "cannot standardize zero rows");
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  const Vector mean = features.colwise().mean().transpose();
  Vector var = Vector::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) var.array() += (features.row(i).transpose() - mean).array().square();
  var /= static_cast<double>(n);

  Standardizer s;
  s.input_dimension_ = d;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (var(j) > kVarianceFloor) s.kept_.push_back(j);
  }
  const auto kept = static_cast<Eigen::Index>(s.kept_.size());
  s.mean_.resize(kept);
  s.inv_scale_.resize(kept);
  for (Eigen::Index k = 0; k < kept; ++k) {
    const Eigen::Index j = s.kept_[static_cast<std::size_t>(k)];
    s.mean_(k) = mean(j);
    s.inv_scale_(k) = 1.0 / std::sqrt(var(j));
  }
  return s;
}

Matrix Standardizer::transform(const FeatureMatrix& features) const {
  if (features.cols() != input_dimension_) {
    throw Error(Errc::kDimensionMismatch, "standardizer fitted on dimension " + std::to_string(input_dimension_) +
                                              ", got " + std::to_string(features.cols()));
  }
  const auto kept = static_cast<Eigen::Index>(kept_.size());
  Matrix out(features.rows(), kept);
  for (Eigen::Index k = 0; k < kept; ++k) {
    const Eigen::Index j = kept_[static_cast<std::size_t>(k)];
    out.col(k) = ((features.col(j).array() - mean_(k)) * inv_scale_(k)).matrix();
  }
  return out;
}

}  // namespace texnoise::classifiers
