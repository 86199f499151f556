#include "texnoise/classifier_common.hpp"

namespace texnoise::classifiers {

double largest_eigenvalue(const Matrix& gram, int max_iters, double rel_tol) {
  const Eigen::Index n = gram.rows();
  if (n == 0) return 0.0;
  // Deterministic, non-degenerate start vector.
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.01 * static_cast<double>(i % 7);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = gram * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = v.dot(w);
    v = w / norm;
    if (std::abs(next - lambda) <= rel_tol * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

SoftmaxObjective logreg_objective(const Matrix& x, std::span<const int> labels, const Matrix& weights,
                                  const Vector& bias, double l2) {
  const auto n = static_cast<double>(x.rows());
  Matrix probs = x * weights;
  probs.rowwise() += bias.transpose();
  double data_loss = 0.0;
  for (Eigen::Index i = 0; i < probs.rows(); ++i) data_loss -= probs(i, labels[static_cast<std::size_t>(i)]);
  data_loss += detail::softmax_rows(probs);

  const Matrix g = (probs - detail::one_hot(labels, weights.cols())) / n;
  SoftmaxObjective out;
  out.loss = data_loss / n + l2 / (2.0 * n) * weights.squaredNorm();
  out.grad_weights = x.transpose() * g + (l2 / n) * weights;
  out.grad_bias = g.colwise().sum().transpose();
  return out;
}

namespace {

struct Iterate {
  Matrix weights;
  Vector bias;
  int iterations = 0;
  bool converged = false;
};

// Plain gradient descent in weight space: O(n d C) per step.
Iterate descend_primal(const Matrix& z, const Labels& labels, int classes, const LogRegConfig& config,
                       double step) {
  Iterate it{Matrix::Zero(z.cols(), classes), Vector::Zero(classes)};
  for (; it.iterations < config.max_iters; ++it.iterations) {
    const auto obj = logreg_objective(z, labels, it.weights, it.bias, config.l2);
    const double grad_norm = std::sqrt(obj.grad_weights.squaredNorm() + obj.grad_bias.squaredNorm());
    if (grad_norm < config.tol) {
      it.converged = true;
      break;
    }
    it.weights -= step * obj.grad_weights;
    it.bias -= step * obj.grad_bias;
  }
  return it;
}

// Same iterates with W = Z^T A. Starting from W = 0 every gradient
// Z^T G + (l2/n) W stays in the row space of Z, so only A (n x C) and the Gram
// matrix K = Z Z^T are needed: O(n^2 C) per step.
Iterate descend_gram(const Matrix& z, const Matrix& gram, const Labels& labels, int classes,
                     const LogRegConfig& config, double step) {
  const Eigen::Index n = z.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Matrix y = detail::one_hot(labels, classes);
  Matrix dual = Matrix::Zero(n, classes);
  Matrix scores = Matrix::Zero(n, classes);  // K * dual, maintained incrementally
  Vector bias = Vector::Zero(classes);
  Iterate it;
  for (; it.iterations < config.max_iters; ++it.iterations) {
    Matrix probs = scores;
    probs.rowwise() += bias.transpose();
    detail::softmax_rows(probs);
    const Matrix g = (probs - y) * inv_n;
    const Matrix m = g + (config.l2 * inv_n) * dual;  // grad_W = Z^T m
    const Matrix km = gram * m;
    const Vector grad_bias = g.colwise().sum().transpose();
    const double grad_w_sq = std::max(0.0, (km.array() * m.array()).sum());
    if (std::sqrt(grad_w_sq + grad_bias.squaredNorm()) < config.tol) {
      it.converged = true;
      break;
    }
    dual -= step * m;
    scores -= step * km;
    bias -= step * grad_bias;
  }
  it.weights = z.transpose() * dual;
  it.bias = bias;
  return it;
}

}  // namespace

LogRegModel train_logreg(const LogRegConfig& config, const LabeledFeatures& data) {
  validate(config);
  detail::require_trainable(data);
  const int classes = data.num_classes();

  LogRegModel model;
  model.standardizer = Standardizer::fit(data.features);
  const Matrix z = model.standardizer.transform(data.features);
  const Eigen::Index n = z.rows();
  const Eigen::Index d = z.cols();

  const bool gram_route =
      config.solver == Solver::kGram || (config.solver == Solver::kAuto && d > n);
  Matrix gram;
  double lambda_max = 0.0;
  if (gram_route) {
    gram = z * z.transpose();
    lambda_max = largest_eigenvalue(gram);
  } else if (d > 0) {
    lambda_max = d <= n ? largest_eigenvalue(z.transpose() * z) : largest_eigenvalue(z * z.transpose());
  }
  // Softmax cross-entropy has Hessian norm <= 1/2 in the logits; the bias adds
  // a column of ones (norm^2 = n).
  const double lipschitz = (lambda_max + static_cast<double>(n)) / (2.0 * n) + config.l2 / n;
  const double step = config.learning_rate / lipschitz;

  Iterate it = gram_route ? descend_gram(z, gram, data.labels, classes, config, step)
                          : descend_primal(z, data.labels, classes, config, step);
  model.weights = std::move(it.weights);
  model.bias = std::move(it.bias);
  model.iterations = it.iterations;
  model.converged = it.converged;
  return model;
}

Labels predict(const LogRegModel& model, const FeatureMatrix& features) {
  detail::require_dimension(model.standardizer.input_dimension(), features.cols());
  Matrix scores = model.standardizer.transform(features) * model.weights;
  scores.rowwise() += model.bias.transpose();
  return detail::argmax_rows(scores);
}

}  // namespace texnoise::classifiers
