#include <numbers>

#include "texnoise/classifier_common.hpp"

namespace texnoise::classifiers {

GnbModel train_gnb(const GnbConfig& config, const LabeledFeatures& data) {
  validate(config);
  detail::require_trainable(data);
  const Eigen::Index d = data.dimension();
  const int classes = data.num_classes();
  const Eigen::Index n = data.features.rows();

  GnbModel model;
  model.means = Matrix::Zero(classes, d);
  model.variances = Matrix::Zero(classes, d);
  model.log_priors = Vector::Constant(classes, -std::numeric_limits<double>::infinity());

  std::vector<Eigen::Index> counts(static_cast<std::size_t>(classes), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = data.labels[static_cast<std::size_t>(i)];
    model.means.row(c) += data.features.row(i);
    ++counts[static_cast<std::size_t>(c)];
  }
  for (int c = 0; c < classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) model.means.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = data.labels[static_cast<std::size_t>(i)];
    model.variances.row(c).array() += (data.features.row(i) - model.means.row(c)).array().square();
  }

  const Vector overall_mean = data.features.colwise().mean().transpose();
  double max_variance = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double v = (data.features.col(j).array() - overall_mean(j)).square().mean();
    max_variance = std::max(max_variance, v);
  }
  model.epsilon = config.var_smoothing * max_variance;
  // Every feature constant: fall back to an absolute floor so densities stay finite.
  if (model.epsilon <= 0.0) model.epsilon = config.var_smoothing > 0.0 ? config.var_smoothing : 1e-300;

  for (int c = 0; c < classes; ++c) {
    const auto count = counts[static_cast<std::size_t>(c)];
    if (count == 0) continue;
    model.variances.row(c) /= static_cast<double>(count);
    model.log_priors(c) = std::log(static_cast<double>(count) / static_cast<double>(n));
  }
  model.variances.array() += model.epsilon;
  return model;
}

Matrix gnb_log_joint(const GnbModel& model, const FeatureMatrix& features) {
  detail::require_dimension(model.means.cols(), features.cols());
  const Eigen::Index classes = model.means.rows();
  Matrix scores(features.rows(), classes);
  for (Eigen::Index c = 0; c < classes; ++c) {
    if (!std::isfinite(model.log_priors(c))) {
      scores.col(c).setConstant(-std::numeric_limits<double>::infinity());
      continue;
    }
    const Eigen::ArrayXd var = model.variances.row(c).transpose().array();
    const double log_norm = -0.5 * (2.0 * std::numbers::pi * var).log().sum();
    const Eigen::ArrayXd inv_two_var = 0.5 / var;
    const Eigen::ArrayXd mean = model.means.row(c).transpose().array();
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
      const Eigen::ArrayXd diff = features.row(i).transpose().array() - mean;
      scores(i, c) = model.log_priors(c) + log_norm - (diff.square() * inv_two_var).sum();
    }
  }
  return scores;
}

Labels predict(const GnbModel& model, const FeatureMatrix& features) {
  return detail::argmax_rows(gnb_log_joint(model, features));
}

}  // namespace texnoise::classifiers
