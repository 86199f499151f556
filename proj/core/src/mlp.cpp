#include "texnoise/classifier_common.hpp"
#include "texnoise/random.hpp"

namespace texnoise::classifiers {

MlpParams mlp_initialize(Eigen::Index inputs, int hidden, int classes, std::uint64_t seed) {
  std::mt19937_64 engine(mix64(seed));
  const auto fill = [&](Matrix& m, double limit) {
    // Column-major fill order is part of the reproducibility contract.
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = limit * (2.0 * uniform01(engine) - 1.0);
    }
  };
  MlpParams p;
  p.w1.resize(inputs, hidden);
  p.w2.resize(hidden, classes);
  fill(p.w1, inputs > 0 ? std::sqrt(6.0 / static_cast<double>(inputs)) : 0.0);
  fill(p.w2, std::sqrt(3.0 / static_cast<double>(hidden)));
  p.b1 = Vector::Zero(hidden);
  p.b2 = Vector::Zero(classes);
  return p;
}

namespace {

struct Forward {
  Matrix pre;     // n x h
  Matrix active;  // relu(pre)
  Matrix logits;  // n x C
  Matrix probs;
  double lse_sum = 0.0;
};

Forward forward_from_preactivation(Matrix pre, const MlpParams& p) {
  Forward f;
  f.pre = std::move(pre);
  f.active = f.pre.cwiseMax(0.0);
  f.logits = f.active * p.w2;
  f.logits.rowwise() += p.b2.transpose();
  f.probs = f.logits;
  f.lse_sum = detail::softmax_rows(f.probs);
  return f;
}

// Gradient with respect to the hidden pre-activations plus the output layer
// gradients; shared by the objective and both training routes.
struct Backward {
  Matrix g_pre;  // dJ/d(pre), n x h (data term only)
  Matrix grad_w2;
  Vector grad_b2;
  Vector grad_b1;
};

Backward backward(const Forward& f, const Matrix& y, const MlpParams& p, double l2) {
  const double inv_n = 1.0 / static_cast<double>(y.rows());
  const Matrix g_out = (f.probs - y) * inv_n;
  Backward b;
  b.grad_w2 = f.active.transpose() * g_out + (l2 * inv_n) * p.w2;
  b.grad_b2 = g_out.colwise().sum().transpose();
  b.g_pre = (g_out * p.w2.transpose()).cwiseProduct((f.pre.array() > 0.0).cast<double>().matrix());
  b.grad_b1 = b.g_pre.colwise().sum().transpose();
  return b;
}

// First-layer weights as explicit d x h matrices.
class PrimalInput {
 public:
  PrimalInput(const Matrix& x, Matrix w1) : x_(x), w1_(std::move(w1)), velocity_(Matrix::Zero(w1_.rows(), w1_.cols())) {}

  Eigen::Index inputs() const { return x_.cols(); }
  Matrix preactivation() const { return x_ * w1_; }

  void step(const Matrix& g_pre, double rate, double decay, double momentum) {
    velocity_ = momentum * velocity_ - rate * (x_.transpose() * g_pre + decay * w1_);
    w1_ += velocity_;
  }

  Matrix weights() const { return w1_; }

 private:
  const Matrix& x_;
  Matrix w1_;
  Matrix velocity_;
};

// First-layer weights kept as W1 = s * W0 + X^T B and velocity
// V = s_v * W0 + X^T B_v. Every update is a combination of X^T(...) and W1,
// so the representation is closed under momentum GD with weight decay.
class GramInput {
 public:
  GramInput(const Matrix& x, Matrix w0)
      : x_(x), w0_(std::move(w0)), xw0_(x_ * w0_), gram_(x_ * x_.transpose()),
        coef_(Matrix::Zero(x_.rows(), w0_.cols())), coef_velocity_(Matrix::Zero(x_.rows(), w0_.cols())) {}

  Eigen::Index inputs() const { return x_.cols(); }
  Matrix preactivation() const { return scale_ * xw0_ + gram_ * coef_; }

  void step(const Matrix& g_pre, double rate, double decay, double momentum) {
    scale_velocity_ = momentum * scale_velocity_ - rate * decay * scale_;
    coef_velocity_ = momentum * coef_velocity_ - rate * (g_pre + decay * coef_);
    scale_ += scale_velocity_;
    coef_ += coef_velocity_;
  }

  Matrix weights() const { return scale_ * w0_ + x_.transpose() * coef_; }

 private:
  const Matrix& x_;
  Matrix w0_;
  Matrix xw0_;
  Matrix gram_;
  double scale_ = 1.0;
  double scale_velocity_ = 0.0;
  Matrix coef_;
  Matrix coef_velocity_;
};

template <typename Input>
MlpParams run_epochs(Input& input, MlpParams p, const Matrix& y, const MlpConfig& config) {
  const Eigen::Index d = input.inputs();
  const double inv_n = 1.0 / static_cast<double>(y.rows());
  const double rate_in = config.learning_rate / static_cast<double>(std::max<Eigen::Index>(d, 1));
  const double rate_hidden = config.learning_rate / static_cast<double>(config.hidden);
  const double rate_bias = config.learning_rate;
  Matrix v_w2 = Matrix::Zero(p.w2.rows(), p.w2.cols());
  Vector v_b1 = Vector::Zero(p.b1.size());
  Vector v_b2 = Vector::Zero(p.b2.size());

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Matrix pre = input.preactivation();
    pre.rowwise() += p.b1.transpose();
    const Forward f = forward_from_preactivation(std::move(pre), p);
    const Backward b = backward(f, y, p, config.l2);

    input.step(b.g_pre, rate_in, config.l2 * inv_n, config.momentum);
    v_w2 = config.momentum * v_w2 - rate_hidden * b.grad_w2;
    v_b1 = config.momentum * v_b1 - rate_bias * b.grad_b1;
    v_b2 = config.momentum * v_b2 - rate_bias * b.grad_b2;
    p.w2 += v_w2;
    p.b1 += v_b1;
    p.b2 += v_b2;
  }
  p.w1 = input.weights();
  return p;
}

}  // namespace

MlpObjective mlp_objective(const Matrix& x, std::span<const int> labels, const MlpParams& params, double l2) {
  const auto n = static_cast<double>(x.rows());
  Matrix pre = x * params.w1;
  pre.rowwise() += params.b1.transpose();
  const Forward f = forward_from_preactivation(std::move(pre), params);

  double data_loss = f.lse_sum;
  for (Eigen::Index i = 0; i < f.logits.rows(); ++i) data_loss -= f.logits(i, labels[static_cast<std::size_t>(i)]);

  const Matrix y = detail::one_hot(labels, params.w2.cols());
  const Backward b = backward(f, y, params, l2);
  MlpObjective out;
  out.loss = data_loss / n + l2 / (2.0 * n) * (params.w1.squaredNorm() + params.w2.squaredNorm());
  out.grad.w1 = x.transpose() * b.g_pre + (l2 / n) * params.w1;
  out.grad.b1 = b.grad_b1;
  out.grad.w2 = b.grad_w2;
  out.grad.b2 = b.grad_b2;
  return out;
}

MlpModel train_mlp(const MlpConfig& config, const LabeledFeatures& data) {
  validate(config);
  detail::require_trainable(data);
  MlpModel model;
  model.standardizer = Standardizer::fit(data.features);
  const Matrix z = model.standardizer.transform(data.features);
  const Matrix y = detail::one_hot(data.labels, data.num_classes());

  MlpParams init = mlp_initialize(z.cols(), config.hidden, data.num_classes(), config.seed);
  const bool gram_route =
      config.solver == Solver::kGram || (config.solver == Solver::kAuto && z.cols() > z.rows());
  Matrix w0 = std::move(init.w1);
  if (gram_route) {
    GramInput input(z, std::move(w0));
    model.params = run_epochs(input, std::move(init), y, config);
  } else {
    PrimalInput input(z, std::move(w0));
    model.params = run_epochs(input, std::move(init), y, config);
  }
  return model;
}

Labels predict(const MlpModel& model, const FeatureMatrix& features) {
  detail::require_dimension(model.standardizer.input_dimension(), features.cols());
  const auto& p = model.params;
  Matrix hidden = model.standardizer.transform(features) * p.w1;
  hidden.rowwise() += p.b1.transpose();
  Matrix scores = hidden.cwiseMax(0.0) * p.w2;
  scores.rowwise() += p.b2.transpose();
  return detail::argmax_rows(scores);
}

}  // namespace texnoise::classifiers
