#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "texnoise/classifiers.hpp"
#include "texnoise/error.hpp"

namespace {

using namespace texnoise;
using namespace texnoise::classifiers;

template <typename Fn>
Errc error_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected texnoise::Error";
  return Errc::kInvalidArgument;
}

LabeledFeatures make_data(std::initializer_list<std::initializer_list<double>> rows, Labels labels) {
  LabeledFeatures data;
  data.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const double v : r) data.features(i, j++) = v;
    ++i;
  }
  data.labels = std::move(labels);
  return data;
}

// Gaussian blobs, one per class, in `d` dimensions.
LabeledFeatures blobs(int n_per_class, int classes, int d, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, spread);
  LabeledFeatures data;
  data.features.resize(n_per_class * classes, d);
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < n_per_class; ++i) {
      const int row = c * n_per_class + i;
      for (int j = 0; j < d; ++j) data.features(row, j) = (j % classes == c ? 2.0 : 0.0) + noise(rng);
      data.labels.push_back(c);
    }
  }
  return data;
}

double train_accuracy(const ClassifierConfig& config, const LabeledFeatures& data) {
  const auto model = train(config, data);
  return evaluate(predict(model, data.features), data.labels);
}

// Relative error between an analytic gradient and central differences of `loss`.
template <typename Loss>
double gradient_error(Matrix& param, const Matrix& analytic, Loss&& loss, double h = 1e-6) {
  Matrix numeric(param.rows(), param.cols());
  for (Eigen::Index i = 0; i < param.rows(); ++i) {
    for (Eigen::Index j = 0; j < param.cols(); ++j) {
      const double saved = param(i, j);
      param(i, j) = saved + h;
      const double up = loss();
      param(i, j) = saved - h;
      const double down = loss();
      param(i, j) = saved;
      numeric(i, j) = (up - down) / (2.0 * h);
    }
  }
  const double scale = std::max({analytic.norm(), numeric.norm(), 1e-12});
  return (analytic - numeric).norm() / scale;
}

// --- data handling ---------------------------------------------------------

TEST(LabeledFeatures, ValidateAndSelect) {
  auto data = make_data({{1, 2}, {3, 4}, {5, 6}}, {0, 1, 2});
  data.validate();
  EXPECT_EQ(data.num_classes(), 3);
  const std::vector<std::size_t> rows = {2, 0};
  const auto sub = select_rows(data, rows);
  EXPECT_EQ(sub.labels, (Labels{2, 0}));
  EXPECT_EQ(sub.features(0, 1), 6.0);
  EXPECT_EQ(sub.num_classes(), 3);
  const std::vector<std::size_t> first = {0};
  EXPECT_EQ(select_rows(data, first).num_classes(), 3);

  data.labels.pop_back();
  EXPECT_EQ(error_code([&] { data.validate(); }), Errc::kLengthMismatch);
}

TEST(Evaluate, FractionCorrect) {
  const std::vector<int> p = {0, 1, 1, 2};
  const std::vector<int> t = {0, 1, 2, 2};
  EXPECT_EQ(evaluate(p, t), 0.75);
  const std::vector<int> short_truth = {0};
  EXPECT_EQ(error_code([&] { evaluate(p, short_truth); }), Errc::kLengthMismatch);
  EXPECT_EQ(error_code([&] { evaluate({}, {}); }), Errc::kEmptyInput);
}

TEST(Standardizer, ZeroMeanUnitVarianceAndDroppedColumns) {
  FeatureMatrix x(4, 3);
  x << 1, 5, 0, 2, 5, 0, 3, 5, 0, 4, 5, 1;
  const auto s = Standardizer::fit(x);
  ASSERT_EQ(s.kept().size(), 2u);
  EXPECT_EQ(s.kept()[0], 0);
  EXPECT_EQ(s.kept()[1], 2);
  const Matrix z = s.transform(x);
  ASSERT_EQ(z.cols(), 2);
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    EXPECT_NEAR(z.col(j).mean(), 0.0, 1e-12);
    EXPECT_NEAR(z.col(j).squaredNorm() / 4.0, 1.0, 1e-12);
  }
  FeatureMatrix wrong(1, 2);
  EXPECT_EQ(error_code([&] { s.transform(wrong); }), Errc::kDimensionMismatch);
}

// --- KNN -------------------------------------------------------------------

TEST(Knn, NearestNeighbourAndVote) {
  const auto data = make_data({{0, 0}, {0, 1}, {1, 0}, {10, 10}, {10, 11}}, {0, 0, 0, 1, 1});
  const auto model = train_knn({1}, data);
  FeatureMatrix q(2, 2);
  q << 0.2, 0.2, 9, 9;
  EXPECT_EQ(predict(model, q), (Labels{0, 1}));
  const auto five = train_knn({5}, data);
  EXPECT_EQ(predict(five, q), (Labels{0, 0}));  // 3 votes against 2
}

TEST(Knn, TiesFavourLowerLabel) {
  // Equidistant neighbours with different labels, and a split vote.
  const auto data = make_data({{1, 0}, {-1, 0}}, {1, 0});
  FeatureMatrix origin = FeatureMatrix::Zero(1, 2);
  EXPECT_EQ(predict(train_knn({1}, data), origin), (Labels{0}));
  EXPECT_EQ(predict(train_knn({2}, data), origin), (Labels{0}));
}

TEST(Knn, KLargerThanTrainingSetUsesAll) {
  const auto data = make_data({{0}, {1}, {2}}, {1, 1, 0});
  FeatureMatrix q(1, 1);
  q << 2.0;
  EXPECT_EQ(predict(train_knn({10}, data), q), (Labels{1}));
}

TEST(Knn, Errors) {
  const auto one_class = make_data({{0}, {1}}, {0, 0});
  EXPECT_EQ(error_code([&] { train_knn({5}, one_class); }), Errc::kDegenerateData);
  const auto data = make_data({{0}, {1}}, {0, 1});
  FeatureMatrix q(1, 2);
  EXPECT_EQ(error_code([&] { predict(train_knn({1}, data), q); }), Errc::kDimensionMismatch);
  EXPECT_EQ(error_code([&] { train_knn({0}, data); }), Errc::kInvalidArgument);
}

// --- Gaussian naive Bayes --------------------------------------------------

TEST(Gnb, LogJointMatchesHandComputation) {
  const auto data = make_data({{0.0, 1.0}, {2.0, 1.0}, {4.0, 3.0}, {6.0, 7.0}, {8.0, 5.0}}, {0, 0, 1, 1, 1});
  const GnbConfig config{1e-3};
  const auto model = train_gnb(config, data);

  // Independent re-derivation: per-class population moments, smoothing by
  // var_smoothing times the largest overall feature variance.
  const double var_x = 8.0;                 // population variance of {0,2,4,6,8}
  const double var_y = 5.44;                // of {1,1,3,7,5}
  const double eps = 1e-3 * std::max(var_x, var_y);
  EXPECT_NEAR(model.epsilon, eps, 1e-15);
  const double mu[2][2] = {{1.0, 1.0}, {6.0, 5.0}};
  const double var[2][2] = {{1.0 + eps, 0.0 + eps}, {8.0 / 3.0 + eps, 8.0 / 3.0 + eps}};
  const double prior[2] = {2.0 / 5.0, 3.0 / 5.0};

  FeatureMatrix q(1, 2);
  q << 3.0, 2.0;
  const Matrix joint = gnb_log_joint(model, q);
  for (int c = 0; c < 2; ++c) {
    double expected = std::log(prior[c]);
    for (int j = 0; j < 2; ++j) {
      const double diff = q(0, j) - mu[c][j];
      expected += -0.5 * std::log(2.0 * M_PI * var[c][j]) - diff * diff / (2.0 * var[c][j]);
    }
    EXPECT_NEAR(joint(0, c), expected, 1e-9 * std::abs(expected));
  }
  EXPECT_EQ(predict(model, q)[0], joint(0, 0) >= joint(0, 1) ? 0 : 1);
}

TEST(Gnb, SeparatesBlobs) {
  EXPECT_EQ(train_accuracy(GnbConfig{}, blobs(30, 3, 6, 0.3, 1)), 1.0);
}

TEST(Gnb, ConstantFeaturesStayFinite) {
  auto data = blobs(10, 2, 3, 0.2, 2);
  data.features.col(1).setConstant(0.5);
  const auto model = train_gnb({}, data);
  const Matrix joint = gnb_log_joint(model, data.features);
  EXPECT_TRUE(joint.allFinite());
}

// --- logistic regression ---------------------------------------------------

TEST(LogReg, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const double l2 : {0.0, 1.0}) {
    Matrix x(12, 5);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
    std::vector<int> labels;
    for (int i = 0; i < 12; ++i) labels.push_back(i % 3);
    Matrix w(5, 3);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = 0.5 * g(rng);
    Matrix b(3, 1);
    for (Eigen::Index i = 0; i < 3; ++i) b(i, 0) = 0.5 * g(rng);

    const auto obj = logreg_objective(x, labels, w, b.col(0), l2);
    const auto loss = [&] { return logreg_objective(x, labels, w, b.col(0), l2).loss; };
    EXPECT_LT(gradient_error(w, obj.grad_weights, loss), 1e-4);
    const Matrix gb = obj.grad_bias;
    EXPECT_LT(gradient_error(b, gb, loss), 1e-4);
  }
}

TEST(LogReg, LossIsMeanCrossEntropyPlusPenalty) {
  Matrix x(2, 1);
  x << 1.0, -1.0;
  const std::vector<int> labels = {0, 1};
  Matrix w(1, 2);
  w << 1.0, -1.0;
  const Vector b = Vector::Zero(2);
  // Each row: logits (+-1, -+1), p(correct) = e / (e + e^-1).
  const double ce = -std::log(std::exp(1.0) / (std::exp(1.0) + std::exp(-1.0)));
  EXPECT_NEAR(logreg_objective(x, labels, w, b, 0.0).loss, ce, 1e-15);
  EXPECT_NEAR(logreg_objective(x, labels, w, b, 2.0).loss, ce + 2.0 / 4.0 * 2.0, 1e-15);
}

TEST(LogReg, SeparatesBlobsAndConverges) {
  const auto data = blobs(25, 4, 8, 0.4, 3);
  const auto model = train_logreg({}, data);
  EXPECT_TRUE(model.converged);
  EXPECT_LT(model.iterations, 5000);
  EXPECT_EQ(evaluate(predict(model, data.features), data.labels), 1.0);
}

TEST(LogReg, PrimalAndGramRoutesAgree) {
  // d > n so both routes are meaningful; include a constant column.
  auto data = blobs(6, 3, 40, 0.8, 4);
  data.features.col(7).setConstant(0.25);
  LogRegConfig primal;
  primal.solver = Solver::kPrimal;
  primal.max_iters = 300;
  LogRegConfig gram = primal;
  gram.solver = Solver::kGram;
  const auto a = train_logreg(primal, data);
  const auto b = train_logreg(gram, data);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_LT((a.weights - b.weights).norm(), 1e-9 * std::max(1.0, a.weights.norm()));
  EXPECT_LT((a.bias - b.bias).norm(), 1e-9 * std::max(1.0, a.bias.norm()));
}

TEST(LogReg, LargestEigenvalueByPowerIteration) {
  Matrix m(3, 3);
  m << 4, 1, 0, 1, 3, 0, 0, 0, 1;
  const double expected = (7.0 + std::sqrt(5.0)) / 2.0;
  EXPECT_NEAR(largest_eigenvalue(m), expected, 1e-8);
  EXPECT_EQ(largest_eigenvalue(Matrix::Zero(2, 2)), 0.0);
}

TEST(LogReg, DegenerateInputs) {
  const auto one_class = make_data({{0}, {1}}, {1, 1});
  EXPECT_EQ(error_code([&] { train_logreg({}, one_class); }), Errc::kDegenerateData);
  LabeledFeatures empty;
  empty.features.resize(0, 3);
  EXPECT_EQ(error_code([&] { train_logreg({}, empty); }), Errc::kEmptyInput);
}

TEST(LogReg, AllConstantFeaturesPredictFromBias) {
  // Nothing survives standardization; the bias alone should learn the prior.
  const auto data = make_data({{1, 2}, {1, 2}, {1, 2}}, {0, 1, 1});
  const auto model = train_logreg({}, data);
  EXPECT_EQ(predict(model, data.features), (Labels{1, 1, 1}));
}

// --- MLP -------------------------------------------------------------------

TEST(Mlp, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix x(10, 4);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) labels.push_back(i % 3);
  MlpParams p = mlp_initialize(4, 6, 3, 99);
  for (Eigen::Index i = 0; i < p.b1.size(); ++i) p.b1(i) = 0.1 * g(rng);
  for (Eigen::Index i = 0; i < p.b2.size(); ++i) p.b2(i) = 0.1 * g(rng);
  const double l2 = 0.3;

  const auto obj = mlp_objective(x, labels, p, l2);
  const auto loss = [&] { return mlp_objective(x, labels, p, l2).loss; };
  EXPECT_LT(gradient_error(p.w1, obj.grad.w1, loss), 1e-3);
  EXPECT_LT(gradient_error(p.w2, obj.grad.w2, loss), 1e-3);
  Matrix b1 = p.b1;
  const auto loss_b1 = [&] {
    MlpParams q = p;
    q.b1 = b1.col(0);
    return mlp_objective(x, labels, q, l2).loss;
  };
  EXPECT_LT(gradient_error(b1, Matrix(obj.grad.b1), loss_b1), 1e-3);
  Matrix b2 = p.b2;
  const auto loss_b2 = [&] {
    MlpParams q = p;
    q.b2 = b2.col(0);
    return mlp_objective(x, labels, q, l2).loss;
  };
  EXPECT_LT(gradient_error(b2, Matrix(obj.grad.b2), loss_b2), 1e-3);
}

TEST(Mlp, InitializationRanges) {
  const auto p = mlp_initialize(24, 100, 5, 1);
  EXPECT_LE(p.w1.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 24.0));
  EXPECT_LE(p.w2.cwiseAbs().maxCoeff(), std::sqrt(3.0 / 100.0));
  EXPECT_TRUE(p.b1.isZero());
  EXPECT_TRUE(p.b2.isZero());
  const auto again = mlp_initialize(24, 100, 5, 1);
  EXPECT_EQ(p.w1, again.w1);
  EXPECT_NE(p.w1, mlp_initialize(24, 100, 5, 2).w1);
}

TEST(Mlp, LearnsXor) {
  LabeledFeatures data;
  data.features.resize(40, 2);
  std::mt19937_64 rng(13);
  std::normal_distribution<double> jitter(0.0, 0.05);
  for (int i = 0; i < 40; ++i) {
    const int a = i % 2;
    const int b = (i / 2) % 2;
    data.features(i, 0) = a + jitter(rng);
    data.features(i, 1) = b + jitter(rng);
    data.labels.push_back(a ^ b);
  }
  for (const std::uint64_t seed : {0u, 1u, 2u}) {
    MlpConfig config;
    config.seed = seed;
    EXPECT_GE(train_accuracy(config, data), 0.95) << "seed " << seed;
  }
}

TEST(Mlp, PrimalAndGramRoutesAgree) {
  auto data = blobs(5, 3, 30, 0.8, 5);
  data.features.col(3).setConstant(1.0);
  MlpConfig primal;
  primal.hidden = 16;
  primal.epochs = 60;
  primal.solver = Solver::kPrimal;
  MlpConfig gram = primal;
  gram.solver = Solver::kGram;
  const auto a = train_mlp(primal, data);
  const auto b = train_mlp(gram, data);
  EXPECT_LT((a.params.w1 - b.params.w1).norm(), 1e-8 * std::max(1.0, a.params.w1.norm()));
  EXPECT_LT((a.params.w2 - b.params.w2).norm(), 1e-8 * std::max(1.0, a.params.w2.norm()));
  EXPECT_EQ(predict(a, data.features), predict(b, data.features));
}

TEST(Mlp, DeterministicForSeed) {
  const auto data = blobs(10, 3, 5, 0.5, 6);
  MlpConfig config;
  config.epochs = 30;
  const auto a = train_mlp(config, data);
  const auto b = train_mlp(config, data);
  EXPECT_EQ(a.params.w1, b.params.w1);
  EXPECT_EQ(a.params.b2, b.params.b2);
}

TEST(Mlp, SeparatesBlobs) {
  EXPECT_EQ(train_accuracy(MlpConfig{}, blobs(20, 4, 10, 0.4, 7)), 1.0);
}

// --- configuration ---------------------------------------------------------

TEST(ClassifierConfig, ParseIdsAndRoundTrip) {
  EXPECT_EQ(classifier_id(parse_classifier("knn")), "knn");
  EXPECT_EQ(std::get<KnnConfig>(parse_classifier("knn:k=3")).k, 3);
  EXPECT_EQ(classifier_id(parse_classifier("nb")), "gnb");
  EXPECT_EQ(classifier_id(parse_classifier("lr")), "logreg");
  EXPECT_EQ(display_name(parse_classifier("logreg")), "LR");
  EXPECT_EQ(display_name(parse_classifier("gnb")), "NB");
  const auto mlp = parse_classifier("mlp:hidden=50,seed=7,solver=gram,learning_rate=0.25");
  const auto& m = std::get<MlpConfig>(mlp);
  EXPECT_EQ(m.hidden, 50);
  EXPECT_EQ(m.seed, 7u);
  EXPECT_EQ(m.solver, Solver::kGram);
  for (const auto& c : {parse_classifier("knn"), parse_classifier("gnb:var_smoothing=1e-5"),
                        parse_classifier("logreg:l2=0.5,tol=1e-8"), mlp}) {
    EXPECT_EQ(to_spec_string(parse_classifier(to_spec_string(c))), to_spec_string(c));
  }
}

TEST(ClassifierConfig, ParseErrors) {
  for (const char* bad : {"svm", "knn:k=0", "knn:k", "knn:q=1", "mlp:momentum=1", "logreg:tol=-1",
                          "logreg:solver=fast", "mlp:hidden=x"}) {
    EXPECT_EQ(error_code([&] { parse_classifier(bad); }), Errc::kInvalidArgument) << bad;
  }
}

// --- properties ------------------------------------------------------------

TEST(Gnb, BoundaryBetweenTightSupportsIsNearHalf) {
  LabeledFeatures data;
  data.features.resize(40, 1);
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> jitter(-0.01, 0.01);
  for (int i = 0; i < 40; ++i) {
    const int c = i % 2;
    data.features(i, 0) = c + jitter(rng);
    data.labels.push_back(c);
  }
  const auto model = train_gnb({}, data);
  FeatureMatrix q(2, 1);
  q << 0.45, 0.55;
  EXPECT_EQ(predict(model, q), (Labels{0, 1}));
}

TEST(LogReg, SeparatedTwoDimensionalBlobs) {
  LabeledFeatures data;
  data.features.resize(200, 2);
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const int c = i / 100;
    data.features(i, 0) = 5.0 * c + g(rng);
    data.features(i, 1) = g(rng);
    data.labels.push_back(c);
  }
  EXPECT_GE(train_accuracy(LogRegConfig{}, data), 0.99);
}

TEST(Knn, StoresTrainingDataAndRecallsIt) {
  const auto data = blobs(15, 3, 4, 0.5, 16);
  const auto model = train_knn({1}, data);
  EXPECT_EQ(model.features, data.features);
  EXPECT_EQ(model.labels, data.labels);
  EXPECT_EQ(evaluate(predict(model, data.features), data.labels), 1.0);
}

TEST(Classifiers, PredictionsIgnoreTrainingRowOrder) {
  const auto data = blobs(12, 3, 6, 1.2, 17);
  std::vector<std::size_t> perm(data.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(18));
  const auto shuffled = select_rows(data, perm);
  const auto queries = blobs(10, 3, 6, 1.5, 19).features;
  for (const auto& config : {parse_classifier("knn"), parse_classifier("gnb"), parse_classifier("logreg"),
                             parse_classifier("mlp:epochs=50")}) {
    EXPECT_EQ(predict(train(config, data), queries), predict(train(config, shuffled), queries))
        << classifier_id(config);
  }
}

TEST(Classifiers, ConstantColumnDoesNotChangeArgmax) {
  const auto data = blobs(12, 3, 5, 1.2, 20);
  auto padded = data;
  padded.features.conservativeResize(Eigen::NoChange, 6);
  padded.features.col(5).setConstant(0.125);
  const auto queries = blobs(10, 3, 5, 1.5, 21).features;
  FeatureMatrix padded_queries(queries.rows(), 6);
  padded_queries.leftCols(5) = queries;
  padded_queries.col(5).setConstant(0.125);
  for (const auto& config : {parse_classifier("gnb"), parse_classifier("logreg")}) {
    EXPECT_EQ(predict(train(config, data), queries), predict(train(config, padded), padded_queries))
        << classifier_id(config);
  }
}

TEST(Classifiers, TrainingIsBitReproducible) {
  const auto data = blobs(10, 3, 8, 0.9, 22);
  const auto a = std::get<LogRegModel>(train(parse_classifier("logreg"), data));
  const auto b = std::get<LogRegModel>(train(parse_classifier("logreg"), data));
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

}  // namespace
