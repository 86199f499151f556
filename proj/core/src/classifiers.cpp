#include <algorithm>
#include <charconv>

#include "texnoise/classifier_common.hpp"
#include "texnoise/format.hpp"

namespace texnoise::classifiers {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::kInvalidArgument,
                "bad value '" + std::string(text) + "' for classifier option " + std::string(key));
  }
  return value;
}

Solver parse_solver(std::string_view text) {
  if (text == "auto") return Solver::kAuto;
  if (text == "primal") return Solver::kPrimal;
  if (text == "gram") return Solver::kGram;
  throw Error(Errc::kInvalidArgument, "solver must be auto, primal or gram");
}

template <typename Fn>
void for_each_option(std::string_view options, Fn&& fn) {
  while (!options.empty()) {
    const auto comma = options.find(',');
    const auto item = options.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::kInvalidArgument, "classifier option '" + std::string(item) + "' must be key=value");
    }
    fn(item.substr(0, eq), item.substr(eq + 1));
    options = comma == std::string_view::npos ? std::string_view{} : options.substr(comma + 1);
  }
}

std::string_view solver_name(Solver solver) {
  switch (solver) {
    case Solver::kPrimal: return "primal";
    case Solver::kGram: return "gram";
    case Solver::kAuto: break;
  }
  return "auto";
}

[[noreturn]] void unknown_option(std::string_view kind, std::string_view key) {
  throw Error(Errc::kInvalidArgument, "unknown option '" + std::string(key) + "' for " + std::string(kind));
}

}  // namespace

int LabeledFeatures::num_classes() const {
  if (!class_names.empty()) return static_cast<int>(class_names.size());
  int top = -1;
  for (const int label : labels) top = std::max(top, label);
  return top + 1;
}

void LabeledFeatures::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw Error(Errc::kLengthMismatch, "feature rows and labels differ in length");
  }
  const int classes = num_classes();
  for (const int label : labels) {
    if (label < 0 || label >= classes) {
      throw Error(Errc::kInvalidArgument, "label " + std::to_string(label) + " outside [0, " +
                                              std::to_string(classes) + ")");
    }
  }
}

LabeledFeatures LabeledFeatures::from_vectors(std::span<const descriptors::FeatureVector> vectors, Labels labels,
                                              std::vector<std::string> class_names) {
  if (vectors.size() != labels.size()) {
    throw Error(Errc::kLengthMismatch, "vector and label counts differ");
  }
  const std::size_t d = vectors.empty() ? 0 : vectors.front().dimension();
  LabeledFeatures out;
  out.features.resize(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].dimension() != d) {
      throw Error(Errc::kDimensionMismatch, "feature vectors do not share one dimension");
    }
    out.features.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(vectors[i].values.data(), static_cast<Eigen::Index>(d));
  }
  out.labels = std::move(labels);
  out.class_names = std::move(class_names);
  out.validate();
  return out;
}

LabeledFeatures select_rows(const LabeledFeatures& data, std::span<const std::size_t> rows) {
  LabeledFeatures out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), data.features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= data.size()) throw Error(Errc::kInvalidArgument, "row index out of range");
    out.features.row(static_cast<Eigen::Index>(i)) = data.features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(data.labels[rows[i]]);
  }
  out.class_names = data.class_names;
  if (out.class_names.empty()) {
    // Keep the label space of the parent even if the subset misses the top class.
    for (int c = 0; c < data.num_classes(); ++c) out.class_names.push_back(std::to_string(c));
  }
  return out;
}

ClassifierConfig parse_classifier(std::string_view text) {
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto options = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  ClassifierConfig config;
  if (kind == "knn") {
    KnnConfig c;
    for_each_option(options, [&](auto key, auto value) {
      if (key == "k") c.k = parse_value<int>(key, value);
      else unknown_option(kind, key);
    });
    config = c;
  } else if (kind == "gnb" || kind == "nb") {
    GnbConfig c;
    for_each_option(options, [&](auto key, auto value) {
      if (key == "var_smoothing") c.var_smoothing = parse_value<double>(key, value);
      else unknown_option(kind, key);
    });
    config = c;
  } else if (kind == "logreg" || kind == "lr") {
    LogRegConfig c;
    for_each_option(options, [&](auto key, auto value) {
      if (key == "l2") c.l2 = parse_value<double>(key, value);
      else if (key == "learning_rate") c.learning_rate = parse_value<double>(key, value);
      else if (key == "max_iters") c.max_iters = parse_value<int>(key, value);
      else if (key == "tol") c.tol = parse_value<double>(key, value);
      else if (key == "solver") c.solver = parse_solver(value);
      else unknown_option(kind, key);
    });
    config = c;
  } else if (kind == "mlp") {
    MlpConfig c;
    for_each_option(options, [&](auto key, auto value) {
      if (key == "hidden") c.hidden = parse_value<int>(key, value);
      else if (key == "epochs") c.epochs = parse_value<int>(key, value);
      else if (key == "learning_rate") c.learning_rate = parse_value<double>(key, value);
      else if (key == "momentum") c.momentum = parse_value<double>(key, value);
      else if (key == "l2") c.l2 = parse_value<double>(key, value);
      else if (key == "seed") c.seed = parse_value<std::uint64_t>(key, value);
      else if (key == "solver") c.solver = parse_solver(value);
      else unknown_option(kind, key);
    });
    config = c;
  } else {
    throw Error(Errc::kInvalidArgument, "unknown classifier '" + std::string(kind) + "'");
  }
  validate(config);
  return config;
}

std::string to_spec_string(const ClassifierConfig& config) {
  return std::visit(
      overloaded{
          [](const KnnConfig& c) { return "knn:k=" + std::to_string(c.k); },
          [](const GnbConfig& c) { return "gnb:var_smoothing=" + format_number(c.var_smoothing); },
          [](const LogRegConfig& c) {
            return "logreg:l2=" + format_number(c.l2) + ",learning_rate=" + format_number(c.learning_rate) +
                   ",max_iters=" + std::to_string(c.max_iters) + ",tol=" + format_number(c.tol) +
                   ",solver=" + std::string(solver_name(c.solver));
          },
          [](const MlpConfig& c) {
            return "mlp:hidden=" + std::to_string(c.hidden) + ",epochs=" + std::to_string(c.epochs) +
                   ",learning_rate=" + format_number(c.learning_rate) + ",momentum=" + format_number(c.momentum) +
                   ",l2=" + format_number(c.l2) + ",seed=" + std::to_string(c.seed) +
                   ",solver=" + std::string(solver_name(c.solver));
          },
      },
      config);
}

std::string classifier_id(const ClassifierConfig& config) {
  return std::visit(overloaded{
                        [](const KnnConfig&) { return std::string("knn"); },
                        [](const GnbConfig&) { return std::string("gnb"); },
                        [](const LogRegConfig&) { return std::string("logreg"); },
                        [](const MlpConfig&) { return std::string("mlp"); },
                    },
                    config);
}

std::string display_name(const ClassifierConfig& config) {
  return std::visit(overloaded{
                        [](const KnnConfig&) { return std::string("KNN"); },
                        [](const GnbConfig&) { return std::string("NB"); },
                        [](const LogRegConfig&) { return std::string("LR"); },
                        [](const MlpConfig&) { return std::string("MLP"); },
                    },
                    config);
}

void validate(const ClassifierConfig& config) {
  const auto fail = [](const char* what) { throw Error(Errc::kInvalidArgument, what); };
  std::visit(overloaded{
                 [&](const KnnConfig& c) {
                   if (c.k < 1) fail("knn k must be positive");
                 },
                 [&](const GnbConfig& c) {
                   if (!(c.var_smoothing >= 0.0)) fail("var_smoothing must be >= 0");
                 },
                 [&](const LogRegConfig& c) {
                   if (!(c.l2 >= 0.0)) fail("logreg l2 must be >= 0");
                   if (!(c.learning_rate > 0.0)) fail("logreg learning_rate must be positive");
                   if (c.max_iters < 1) fail("logreg max_iters must be positive");
                   if (!(c.tol > 0.0)) fail("logreg tol must be positive");
                 },
                 [&](const MlpConfig& c) {
                   if (c.hidden < 1) fail("mlp hidden must be positive");
                   if (c.epochs < 1) fail("mlp epochs must be positive");
                   if (!(c.learning_rate > 0.0)) fail("mlp learning_rate must be positive");
                   if (!(c.momentum >= 0.0 && c.momentum < 1.0)) fail("mlp momentum must be in [0, 1)");
                   if (!(c.l2 >= 0.0)) fail("mlp l2 must be >= 0");
                 },
             },
             config);
}

TrainedModel train(const ClassifierConfig& config, const LabeledFeatures& data) {
  return std::visit(overloaded{
                        [&](const KnnConfig& c) -> TrainedModel { return train_knn(c, data); },
                        [&](const GnbConfig& c) -> TrainedModel { return train_gnb(c, data); },
                        [&](const LogRegConfig& c) -> TrainedModel { return train_logreg(c, data); },
                        [&](const MlpConfig& c) -> TrainedModel { return train_mlp(c, data); },
                    },
                    config);
}

Labels predict(const TrainedModel& model, const FeatureMatrix& features) {
  return std::visit([&](const auto& m) { return predict(m, features); }, model);
}

double evaluate(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(Errc::kLengthMismatch, "predicted and truth label counts differ");
  }
  if (truth.empty()) throw Error(Errc::kEmptyInput, "cannot evaluate zero predictions");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace texnoise::classifiers
