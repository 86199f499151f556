#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "texnoise/error.hpp"
#include "texnoise/format.hpp"
#include "texnoise/harness.hpp"
#include "texnoise/random.hpp"

namespace texnoise::harness {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

int resolve_workers(int workers, std::size_t jobs) {
  int n = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(jobs, 1)));
}

}  // namespace

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const int threads = resolve_workers(workers, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<imaging::GrayImage> noisy_images(const Dataset& data, const ExperimentPlan& plan, double level,
                                             const Split& split) {
  std::vector<bool> perturb(data.samples.size(), !plan.noise_test_only);
  if (plan.noise_test_only) {
    for (const auto i : split.test) perturb.at(i) = true;
  }
  std::vector<imaging::GrayImage> out(data.samples.size());
  parallel_for(data.samples.size(), plan.workers, [&](std::size_t i) {
    const auto& sample = data.samples[i];
    if (level == 0.0 || !perturb[i]) {
      out[i] = sample.image;
      return;
    }
    const imaging::NoiseSpec spec{level, derive_noise_seed(plan.seed, sample.relative_path, level), plan.noise_scale};
    auto noisy = imaging::add_gaussian_noise(sample.image, spec);
    out[i] = plan.quantize_after_noise ? imaging::quantize_8bit(noisy) : std::move(noisy);
  });
  return out;
}

classifiers::LabeledFeatures extract_features(const Dataset& data, std::span<const imaging::GrayImage> images,
                                              const descriptors::DescriptorConfig& config, int workers) {
  if (images.size() != data.samples.size()) {
    throw Error(Errc::kLengthMismatch, "image count differs from dataset sample count");
  }
  std::vector<descriptors::FeatureVector> vectors(images.size());
  parallel_for(images.size(), workers, [&](std::size_t i) { vectors[i] = descriptors::extract(images[i], config); });
  return classifiers::LabeledFeatures::from_vectors(vectors, data.labels(), data.class_names());
}

classifiers::LabeledFeatures join_features(const Dataset& data, const features::FeatureFile& file) {
  std::unordered_map<std::string, std::size_t> by_key;
  for (std::size_t r = 0; r < file.records.size(); ++r) {
    if (!by_key.emplace(features::join_key(file.records[r].relative_path), r).second) {
      throw Error(Errc::kDuplicatePath, "two feature records map to " + features::join_key(file.records[r].relative_path));
    }
  }
  const auto d = static_cast<Eigen::Index>(file.header.dimension);
  classifiers::LabeledFeatures out;
  out.features.resize(static_cast<Eigen::Index>(data.samples.size()), d);
  out.class_names = data.class_names();
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const auto& sample = data.samples[i];
    const auto it = by_key.find(features::join_key(sample.relative_path));
    if (it == by_key.end()) {
      throw Error(Errc::kMissingFeatures, "no feature record for " + sample.relative_path);
    }
    const auto& record = file.records[it->second];
    if (record.label != sample.label) {
      throw Error(Errc::kInvalidArgument, "feature record " + record.relative_path + " has label " +
                                              std::to_string(record.label) + ", corpus says " +
                                              std::to_string(sample.label));
    }
    out.features.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(record.values.data(), d);
    out.labels.push_back(sample.label);
  }
  out.validate();
  return out;
}

double train_and_score(const classifiers::LabeledFeatures& features, const Split& split,
                       const classifiers::ClassifierConfig& classifier) {
  const auto train = classifiers::select_rows(features, split.train);
  const auto test = classifiers::select_rows(features, split.test);
  const auto model = classifiers::train(classifier, train);
  const auto predicted = classifiers::predict(model, test.features);
  return 100.0 * classifiers::evaluate(predicted, test.labels);
}

namespace {

classifiers::LabeledFeatures features_for(const Dataset& data, const ExperimentPlan& plan, double level,
                                          const Extraction& extraction, const Split& split,
                                          const std::vector<imaging::GrayImage>* images) {
  return std::visit(overloaded{
                        [&](const descriptors::DescriptorConfig& d) {
                          if (images) return extract_features(data, *images, d, plan.workers);
                          const auto noisy = noisy_images(data, plan, level, split);
                          return extract_features(data, noisy, d, plan.workers);
                        },
                        [&](const ExternalFeatures& e) {
                          return join_features(data, features::read_features(e.file_for(level)));
                        },
                    },
                    extraction);
}

}  // namespace

double run_cell(const Dataset& data, const ExperimentPlan& plan, double noise_level, const Extraction& extraction,
                const classifiers::ClassifierConfig& classifier) {
  const Split split = split_stratified(data, plan.split_ratio, plan.split_seed());
  const auto feats = features_for(data, plan, noise_level, extraction, split, nullptr);
  return train_and_score(feats, split, classifier);
}

RowStats row_stats(std::span<const double> values) {
  RowStats s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (const double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return s;
  double sq = 0.0;
  for (const double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  return s;
}

std::vector<ResultTable> run_matrix(const Dataset& data, const ExperimentPlan& plan, const ProgressFn& progress) {
  plan.validate();
  const auto report = [&](const std::string& message) {
    if (progress) progress(message);
  };
  const Split split = split_stratified(data, plan.split_ratio, plan.split_seed());
  const auto extractions = plan.extractions();
  const std::size_t n_methods = extractions.size();
  const std::size_t n_classifiers = plan.classifiers.size();

  std::vector<ResultTable> tables;
  for (const double level : plan.noise_levels) {
    ResultTable table;
    table.noise_level = level;
    for (const auto& c : plan.classifiers) {
      table.classifier_ids.push_back(classifiers::classifier_id(c));
      table.classifier_names.push_back(classifiers::display_name(c));
    }

    std::vector<imaging::GrayImage> images;
    if (!plan.descriptors.empty()) images = noisy_images(data, plan, level, split);

    // Features are computed once per method and shared by every classifier column.
    std::vector<classifiers::LabeledFeatures> features(n_methods);
    for (std::size_t m = 0; m < n_methods; ++m) {
      features[m] = features_for(data, plan, level, extractions[m], split, &images);
    }
    images.clear();
    report("noise " + format_number(level) + ": features ready");

    std::vector<double> cells(n_methods * n_classifiers);
    parallel_for(cells.size(), plan.workers, [&](std::size_t job) {
      const std::size_t m = job / n_classifiers;
      const std::size_t c = job % n_classifiers;
      cells[job] = train_and_score(features[m], split, plan.classifiers[c]);
    });

    for (std::size_t m = 0; m < n_methods; ++m) {
      ResultRow row;
      row.method_id = method_id(extractions[m]);
      row.method_name = method_name(extractions[m]);
      row.accuracies.assign(cells.begin() + static_cast<std::ptrdiff_t>(m * n_classifiers),
                            cells.begin() + static_cast<std::ptrdiff_t>((m + 1) * n_classifiers));
      row.stats = row_stats(row.accuracies);
      report("noise " + format_number(level) + ": " + row.method_id + " mean " + format_fixed(row.stats.mean, 1));
      table.rows.push_back(std::move(row));
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

FigureSeries figure_series(std::span<const ResultTable> tables) {
  // Labels within this distance of the maximum count as tied.
  constexpr double kTie = 1e-9;
  FigureSeries series;
  for (const auto& table : tables) {
    SeriesPoint cell{table.noise_level, -1.0, {}};
    SeriesPoint mean{table.noise_level, -1.0, {}};
    for (const auto& row : table.rows) {
      for (const double v : row.accuracies) cell.value = std::max(cell.value, v);
      mean.value = std::max(mean.value, row.stats.mean);
    }
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.accuracies.size(); ++c) {
        if (row.accuracies[c] >= cell.value - kTie) cell.argmax.push_back(row.method_id + "/" + table.classifier_ids[c]);
      }
      if (row.stats.mean >= mean.value - kTie) mean.argmax.push_back(row.method_id);
    }
    series.highest_cell.push_back(std::move(cell));
    series.highest_mean.push_back(std::move(mean));
  }
  return series;
}

}  // namespace texnoise::harness
