#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "texnoise/classifiers.hpp"
#include "texnoise/descriptors.hpp"
#include "texnoise/featurestore.hpp"
#include "texnoise/imaging.hpp"

namespace texnoise::harness {

std::string_view library_version() noexcept;

// --- corpus ----------------------------------------------------------------

struct Subject {
  std::string name;
  std::vector<std::string> relative_paths;  // "subject/file.pgm"
};

/// One subdirectory per subject; subjects and files in lexicographic order.
struct DatasetManifest {
  std::filesystem::path root;
  std::vector<Subject> subjects;
  int width = 100;
  int height = 100;

  std::size_t image_count() const noexcept;
};

struct Sample {
  std::string relative_path;
  int label = 0;
  imaging::GrayImage image;
};

/// A manifest with every image decoded and resized to the working resolution.
/// Samples follow manifest order; labels index `manifest.subjects`.
struct Dataset {
  DatasetManifest manifest;
  std::vector<Sample> samples;

  std::vector<std::string> class_names() const;
  std::vector<int> labels() const;
};

/// Lists the corpus without decoding. Only .pgm/.pnm/.png files are picked up.
DatasetManifest scan_dataset(const std::filesystem::path& root, int width = 100, int height = 100);

/// scan_dataset + decode + resize. Errors name the offending file.
Dataset ingest_dataset(const std::filesystem::path& root, int width = 100, int height = 100);

/// Writes each sample as an 8-bit PGM under `out_root`, keeping the relative
/// layout (extensions become .pgm).
void write_dataset(const Dataset& data, const std::filesystem::path& out_root);

struct SyntheticSpec {
  int classes = 5;
  int per_class = 40;
  int width = 100;
  int height = 100;
  double period = 8.0;     // grating wavelength in pixels
  double amplitude = 0.35; // around mid-gray
  std::uint64_t seed = 7;
};

/// Oriented sinusoidal gratings: class c has orientation pi * c / classes,
/// every image gets an independent random phase.
Dataset synthetic_gratings(const SyntheticSpec& spec);

// --- split -----------------------------------------------------------------

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per class: indices shuffled with `seed`, the first ceil(ratio * n) train
/// (clamped to [1, n - 1]), the rest test. Both sides are sorted ascending.
/// A class with a single image is an error.
Split split_stratified(std::span<const int> labels, double ratio, std::uint64_t seed);
Split split_stratified(const Dataset& data, double ratio, std::uint64_t seed);

// --- plan ------------------------------------------------------------------

/// Precomputed features for one method, one file per noise level.
struct ExternalFeatures {
  std::string id;    // method id in result files, e.g. "resnet50"
  std::string name;  // table label, e.g. "ResNet50"
  struct File {
    double noise_level = 0.0;
    std::filesystem::path path;
  };
  std::vector<File> files;

  const std::filesystem::path& file_for(double noise_level) const;
};

using Extraction = std::variant<descriptors::DescriptorConfig, ExternalFeatures>;

std::string method_id(const Extraction& extraction);
std::string method_name(const Extraction& extraction);

struct ExperimentPlan {
  std::filesystem::path dataset;
  int width = 100;
  int height = 100;
  std::vector<double> noise_levels = {0.0, 0.0006, 0.007, 0.0785, 0.8859};
  imaging::NoiseScale noise_scale = imaging::NoiseScale::kVariance;
  bool noise_test_only = false;
  bool quantize_after_noise = false;
  std::vector<descriptors::DescriptorConfig> descriptors = {
      descriptors::LbpParams{1.0, 8}, descriptors::LbpParams{2.0, 16}, descriptors::LdpParams{3},
      descriptors::LdpParams{5}};
  std::vector<ExternalFeatures> external_features;
  std::vector<classifiers::ClassifierConfig> classifiers = {
      classifiers::KnnConfig{}, classifiers::GnbConfig{}, classifiers::LogRegConfig{}, classifiers::MlpConfig{}};
  double split_ratio = 0.8;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency
  std::filesystem::path output_dir;

  void validate() const;
  /// Descriptors first, then external feature sets.
  std::vector<Extraction> extractions() const;
  std::uint64_t split_seed() const noexcept;
};

/// Parses plan JSON. Relative paths resolve against `base_dir`.
ExperimentPlan parse_plan(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentPlan load_plan(const std::filesystem::path& path);
/// Fully resolved plan (every default spelled out). parse_plan accepts it back.
std::string plan_to_json(const ExperimentPlan& plan);

// --- execution -------------------------------------------------------------

/// Noisy copy of every sample image for one ladder level. Per-image seeds come
/// from derive_noise_seed(plan.seed, relative_path, level). With
/// `noise_test_only`, only images in `split.test` are perturbed.
std::vector<imaging::GrayImage> noisy_images(const Dataset& data, const ExperimentPlan& plan, double level,
                                             const Split& split);

classifiers::LabeledFeatures extract_features(const Dataset& data, std::span<const imaging::GrayImage> images,
                                              const descriptors::DescriptorConfig& config, int workers = 1);

/// Rows of `file` reordered to dataset order by relative path (extension
/// ignored). Throws kMissingFeatures when an image has no record.
classifiers::LabeledFeatures join_features(const Dataset& data, const features::FeatureFile& file);

/// One (noise, extraction, classifier) cell: noise -> features -> split ->
/// train -> evaluate. Returns accuracy in percent.
double run_cell(const Dataset& data, const ExperimentPlan& plan, double noise_level, const Extraction& extraction,
                const classifiers::ClassifierConfig& classifier);

/// Train on the split's train rows, score the test rows. Percent.
double train_and_score(const classifiers::LabeledFeatures& features, const Split& split,
                       const classifiers::ClassifierConfig& classifier);

// --- results ---------------------------------------------------------------

struct RowStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1); 0 for a single cell
};

RowStats row_stats(std::span<const double> values);

struct ResultRow {
  std::string method_id;
  std::string method_name;
  std::vector<double> accuracies;  // percent, one per classifier column
  RowStats stats;
};

struct ResultTable {
  double noise_level = 0.0;
  std::vector<std::string> classifier_ids;
  std::vector<std::string> classifier_names;
  std::vector<ResultRow> rows;
};

using ProgressFn = std::function<void(std::string_view message)>;

/// Every cell of the plan, one table per noise level in plan order.
std::vector<ResultTable> run_matrix(const Dataset& data, const ExperimentPlan& plan, const ProgressFn& progress = {});

struct SeriesPoint {
  double noise_level = 0.0;
  double value = 0.0;
  std::vector<std::string> argmax;  // every label attaining `value`
};

struct FigureSeries {
  std::vector<SeriesPoint> highest_cell;  // "method/classifier" labels
  std::vector<SeriesPoint> highest_mean;  // method labels
};

FigureSeries figure_series(std::span<const ResultTable> tables);

// --- reports ---------------------------------------------------------------

std::string results_csv(std::span<const ResultTable> tables);
std::string tables_markdown(std::span<const ResultTable> tables);
std::string figures_csv(const FigureSeries& series);

/// Rebuilds tables from results.csv, taking row/column order and labels from
/// the plan that produced it.
std::vector<ResultTable> parse_results_csv(std::string_view text, const ExperimentPlan& plan);

/// Writes results.csv, tables.md, figures.csv and run.json into `out_dir`.
void render_reports(std::span<const ResultTable> tables, const FigureSeries& series, const ExperimentPlan& plan,
                    const std::filesystem::path& out_dir);

/// Runs `fn(i)` for i in [0, count) on up to `workers` threads. The first
/// exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace texnoise::harness
