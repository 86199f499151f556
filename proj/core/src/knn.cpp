#include <algorithm>
#include <numeric>

#include "texnoise/classifier_common.hpp"

namespace texnoise::classifiers {

KnnModel train_knn(const KnnConfig& config, const LabeledFeatures& data) {
  validate(config);
  detail::require_trainable(data);
  return KnnModel{config, data.features, data.labels, data.num_classes()};
}

Labels predict(const KnnModel& model, const FeatureMatrix& features) {
  detail::require_dimension(model.features.cols(), features.cols());
  const auto n_train = static_cast<std::size_t>(model.features.rows());
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(model.config.k), n_train);

  Labels out;
  out.reserve(static_cast<std::size_t>(features.rows()));
  std::vector<double> dist(n_train);
  std::vector<std::size_t> order(n_train);
  std::vector<int> votes(static_cast<std::size_t>(model.num_classes));
  for (Eigen::Index q = 0; q < features.rows(); ++q) {
    for (std::size_t i = 0; i < n_train; ++i) {
      dist[i] = (model.features.row(static_cast<Eigen::Index>(i)) - features.row(q)).squaredNorm();
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Equal distances rank the lower label first, which makes the vote
    // independent of training row order.
    const auto closer = [&](std::size_t a, std::size_t b) {
      if (dist[a] != dist[b]) return dist[a] < dist[b];
      return model.labels[a] < model.labels[b];
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), closer);

    std::fill(votes.begin(), votes.end(), 0);
    for (std::size_t i = 0; i < k; ++i) ++votes[static_cast<std::size_t>(model.labels[order[i]])];
    out.push_back(static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin()));
  }
  return out;
}

}  // namespace texnoise::classifiers
