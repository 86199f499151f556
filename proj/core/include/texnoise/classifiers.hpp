#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "texnoise/descriptors.hpp"

namespace texnoise::classifiers {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// One sample per row, rows contiguous.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Labels = std::vector<int>;

struct LabeledFeatures {
  FeatureMatrix features;
  Labels labels;
  std::vector<std::string> class_names;

  std::size_t size() const noexcept { return labels.size(); }
  Eigen::Index dimension() const noexcept { return features.cols(); }
  /// class_names.size() when names are given, otherwise max(label) + 1.
  int num_classes() const;
  /// Row count matches label count, labels are in [0, num_classes()).
  void validate() const;

  static LabeledFeatures from_vectors(std::span<const descriptors::FeatureVector> vectors, Labels labels,
                                      std::vector<std::string> class_names = {});
};

LabeledFeatures select_rows(const LabeledFeatures& data, std::span<const std::size_t> rows);

/// Which parameterisation the gradient trainers iterate in. kGram keeps the
/// first-layer weights in the span of the training rows (W = X^T A), which
/// gives the same iterates as kPrimal at O(n^2) per step instead of O(n d).
enum class Solver { kAuto, kPrimal, kGram };

struct KnnConfig {
  int k = 5;
};

struct GnbConfig {
  double var_smoothing = 1e-9;
};

/// Multinomial softmax regression trained by full-batch gradient descent on
///   J(W, b) = mean cross-entropy + l2 / (2 n) * ||W||^2
/// with step learning_rate / L, L the Lipschitz bound of grad J.
struct LogRegConfig {
  double l2 = 1.0;
  double learning_rate = 1.0;
  int max_iters = 5000;
  double tol = 1e-6;
  Solver solver = Solver::kAuto;
};

/// One hidden ReLU layer, softmax output, full-batch gradient descent with
/// classical momentum. Layer l steps by learning_rate / fan_in(l).
struct MlpConfig {
  int hidden = 100;
  int epochs = 200;
  double learning_rate = 0.5;
  double momentum = 0.9;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  Solver solver = Solver::kAuto;
};

using ClassifierConfig = std::variant<KnnConfig, GnbConfig, LogRegConfig, MlpConfig>;

/// "knn", "gnb" (or "nb"), "logreg" (or "lr"), "mlp", optionally followed by
/// ":key=value,..." overrides, e.g. "knn:k=3" or "mlp:hidden=50,seed=7".
ClassifierConfig parse_classifier(std::string_view text);
/// Inverse of parse_classifier with every option spelled out.
std::string to_spec_string(const ClassifierConfig& config);
std::string classifier_id(const ClassifierConfig& config);
/// Column header used in result tables: KNN, NB, LR, MLP.
std::string display_name(const ClassifierConfig& config);
void validate(const ClassifierConfig& config);

/// Per-dimension z-scoring fitted on training rows. Dimensions whose training
/// variance is <= 1e-12 carry no information and are dropped.
class Standardizer {
 public:
  static constexpr double kVarianceFloor = 1e-12;

  static Standardizer fit(const FeatureMatrix& features);
  Matrix transform(const FeatureMatrix& features) const;

  std::span<const Eigen::Index> kept() const noexcept { return kept_; }
  Eigen::Index input_dimension() const noexcept { return input_dimension_; }

 private:
  std::vector<Eigen::Index> kept_;
  Vector mean_;
  Vector inv_scale_;
  Eigen::Index input_dimension_ = 0;
};

struct KnnModel {
  KnnConfig config;
  FeatureMatrix features;
  Labels labels;
  int num_classes = 0;
};

struct GnbModel {
  Matrix means;      // classes x d
  Matrix variances;  // classes x d, already smoothed
  Vector log_priors; // -inf for classes absent from training
  double epsilon = 0.0;
};

struct LogRegModel {
  Standardizer standardizer;
  Matrix weights;  // d' x classes
  Vector bias;
  int iterations = 0;
  bool converged = false;
};

struct MlpParams {
  Matrix w1;  // inputs x hidden
  Vector b1;
  Matrix w2;  // hidden x classes
  Vector b2;
};

struct MlpModel {
  Standardizer standardizer;
  MlpParams params;
};

using TrainedModel = std::variant<KnnModel, GnbModel, LogRegModel, MlpModel>;

KnnModel train_knn(const KnnConfig& config, const LabeledFeatures& data);
GnbModel train_gnb(const GnbConfig& config, const LabeledFeatures& data);
LogRegModel train_logreg(const LogRegConfig& config, const LabeledFeatures& data);
MlpModel train_mlp(const MlpConfig& config, const LabeledFeatures& data);

/// Deterministic given (config, data).
TrainedModel train(const ClassifierConfig& config, const LabeledFeatures& data);

Labels predict(const KnnModel& model, const FeatureMatrix& features);
Labels predict(const GnbModel& model, const FeatureMatrix& features);
Labels predict(const LogRegModel& model, const FeatureMatrix& features);
Labels predict(const MlpModel& model, const FeatureMatrix& features);
Labels predict(const TrainedModel& model, const FeatureMatrix& features);

/// Per-class joint log likelihood log p(c) + sum_j log N(x_j; mu_cj, var_cj).
Matrix gnb_log_joint(const GnbModel& model, const FeatureMatrix& features);

/// Fraction of positions where predicted == truth.
double evaluate(std::span<const int> predicted, std::span<const int> truth);

// --- objectives (exposed for gradient checks) ------------------------------

struct SoftmaxObjective {
  double loss = 0.0;
  Matrix grad_weights;
  Vector grad_bias;
};

/// Value and gradient of mean cross-entropy + l2/(2n)||W||^2 for logits X W + b.
SoftmaxObjective logreg_objective(const Matrix& x, std::span<const int> labels, const Matrix& weights,
                                  const Vector& bias, double l2);

struct MlpObjective {
  double loss = 0.0;
  MlpParams grad;
};

/// Value and backpropagated gradient of mean cross-entropy +
/// l2/(2n)(||W1||^2 + ||W2||^2).
MlpObjective mlp_objective(const Matrix& x, std::span<const int> labels, const MlpParams& params, double l2);

/// Fan-in scaled uniform initialisation: W1 ~ U(+-sqrt(6/inputs)),
/// W2 ~ U(+-sqrt(3/hidden)), zero biases.
MlpParams mlp_initialize(Eigen::Index inputs, int hidden, int classes, std::uint64_t seed);

/// Largest eigenvalue of the symmetric PSD matrix `gram` by power iteration.
double largest_eigenvalue(const Matrix& gram, int max_iters = 200, double rel_tol = 1e-10);

}  // namespace texnoise::classifiers
