// texnoise command line: corpus checks, noisy trees, feature files, single
// evaluations and full benchmark matrices.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "texnoise/classifiers.hpp"
#include "texnoise/descriptors.hpp"
#include "texnoise/error.hpp"
#include "texnoise/featurestore.hpp"
#include "texnoise/format.hpp"
#include "texnoise/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace texnoise;

namespace {

void print_json(const json& j) { std::cout << j.dump() << "\n"; }

int fail(std::string_view code, std::string_view message, int exit_code = 1) {
  const json line{{"error", code}, {"message", message}};
  std::cerr << line.dump(-1, ' ', false, json::error_handler_t::replace) << "\n";
  return exit_code;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct CorpusArgs {
  std::string root;
  int width = 100;
  int height = 100;
};

void add_corpus_options(CLI::App* cmd, CorpusArgs& args) {
  cmd->add_option("--corpus", args.root, "Corpus root, one subdirectory per subject")->required();
  cmd->add_option("--width", args.width, "Working width")->capture_default_str();
  cmd->add_option("--height", args.height, "Working height")->capture_default_str();
}

imaging::NoiseScale scale_from(bool stddev) {
  return stddev ? imaging::NoiseScale::kStdDev : imaging::NoiseScale::kVariance;
}

// Applies one noise level to the whole corpus the same way `bench` does.
std::vector<imaging::GrayImage> perturb(const harness::Dataset& data, double level, std::uint64_t seed, bool stddev,
                                        bool quantize) {
  harness::ExperimentPlan plan;
  plan.seed = seed;
  plan.noise_scale = scale_from(stddev);
  plan.quantize_after_noise = quantize;
  return harness::noisy_images(data, plan, level, harness::Split{});
}

int run_ingest(const CorpusArgs& args) {
  const auto data = harness::ingest_dataset(args.root, args.width, args.height);
  json subjects = json::array();
  for (const auto& s : data.manifest.subjects) {
    subjects.push_back({{"name", s.name}, {"images", s.relative_paths.size()}});
  }
  print_json({{"root", fs::path(args.root).generic_string()},
              {"subjects", subjects},
              {"images", data.samples.size()},
              {"width", args.width},
              {"height", args.height}});
  return 0;
}

int run_synth(const std::string& out, const harness::SyntheticSpec& spec) {
  const auto data = harness::synthetic_gratings(spec);
  harness::write_dataset(data, out);
  print_json({{"out", fs::path(out).generic_string()},
              {"subjects", data.manifest.subjects.size()},
              {"images", data.samples.size()}});
  return 0;
}

int run_noise(const CorpusArgs& args, double level, std::uint64_t seed, const std::string& emit, bool stddev,
              bool quantize) {
  auto data = harness::ingest_dataset(args.root, args.width, args.height);
  auto images = perturb(data, level, seed, stddev, quantize);
  for (std::size_t i = 0; i < images.size(); ++i) data.samples[i].image = std::move(images[i]);
  harness::write_dataset(data, emit);
  print_json({{"emit", fs::path(emit).generic_string()},
              {"level", level},
              {"seed", seed},
              {"images", data.samples.size()}});
  return 0;
}

int run_extract(const CorpusArgs& args, const std::string& descriptor, const std::string& out, double level,
                std::uint64_t seed, bool stddev, bool quantize, int workers) {
  const auto config = descriptors::parse_descriptor(descriptor);
  const auto data = harness::ingest_dataset(args.root, args.width, args.height);
  const auto images = perturb(data, level, seed, stddev, quantize);
  const auto feats = harness::extract_features(data, images, config, workers);

  features::FeatureHeader header;
  header.descriptor_id = descriptors::descriptor_id(config);
  header.dimension = static_cast<std::size_t>(feats.features.cols());
  header.count = data.samples.size();
  std::vector<features::FeatureRecord> records;
  records.reserve(data.samples.size());
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const auto row = feats.features.row(static_cast<Eigen::Index>(i));
    records.push_back({data.samples[i].relative_path, data.samples[i].label,
                       std::vector<double>(row.data(), row.data() + row.size())});
  }
  const fs::path out_path(out);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  features::write_features(out_path, header, records);
  features::write_label_map(features::label_map_path(out_path), data.class_names());
  print_json({{"out", out_path.generic_string()},
              {"descriptor", header.descriptor_id},
              {"dimension", header.dimension},
              {"records", header.count}});
  return 0;
}

int run_eval(const std::string& features_path, const std::string& classifier, double ratio, std::uint64_t seed) {
  const auto config = classifiers::parse_classifier(classifier);
  const auto file = features::read_features(features_path);
  std::vector<std::string> names;
  const auto map_path = features::label_map_path(features_path);
  if (fs::exists(map_path)) names = features::read_label_map(map_path);
  const auto data = features::to_labeled(file, names);
  harness::ExperimentPlan plan;
  plan.seed = seed;
  plan.split_ratio = ratio;
  const auto split = harness::split_stratified(data.labels, ratio, plan.split_seed());
  const double accuracy = harness::train_and_score(data, split, config);
  print_json({{"features", fs::path(features_path).generic_string()},
              {"descriptor", file.header.descriptor_id},
              {"classifier", classifiers::to_spec_string(config)},
              {"train", split.train.size()},
              {"test", split.test.size()},
              {"accuracy", accuracy}});
  return 0;
}

int run_bench(const std::string& plan_path, const std::string& out_override, int workers, bool quiet) {
  auto plan = harness::load_plan(plan_path);
  if (!out_override.empty()) plan.output_dir = fs::absolute(out_override);
  if (workers >= 0) plan.workers = workers;
  if (plan.dataset.empty()) throw Error(Errc::kInvalidPlan, "plan has no dataset");
  if (plan.output_dir.empty()) throw Error(Errc::kInvalidPlan, "plan has no output_dir (or pass --out)");

  const auto start = std::chrono::steady_clock::now();
  const auto data = harness::ingest_dataset(plan.dataset, plan.width, plan.height);
  harness::ProgressFn progress;
  if (!quiet) progress = [](std::string_view message) { std::cerr << message << "\n"; };
  const auto tables = harness::run_matrix(data, plan, progress);
  const auto series = harness::figure_series(tables);
  harness::render_reports(tables, series, plan, plan.output_dir);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  print_json({{"out", plan.output_dir.generic_string()},
              {"cells", tables.size() * (tables.empty() ? 0 : tables[0].rows.size() * tables[0].classifier_ids.size())},
              {"seconds", seconds}});
  return 0;
}

int run_report(const std::string& run_dir) {
  const fs::path dir(run_dir);
  const auto plan = harness::parse_plan(read_text(dir / "run.json"), dir);
  const auto tables = harness::parse_results_csv(read_text(dir / "results.csv"), plan);
  const auto series = harness::figure_series(tables);
  features::write_text_atomic(dir / "tables.md", harness::tables_markdown(tables));
  features::write_text_atomic(dir / "figures.csv", harness::figures_csv(series));
  print_json({{"in", dir.generic_string()}, {"tables", tables.size()}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"texnoise: texture descriptors under Gaussian noise"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(harness::library_version()));

  CorpusArgs corpus;

  auto* ingest = app.add_subcommand("ingest", "Validate a corpus and list its subjects");
  add_corpus_options(ingest, corpus);

  std::string synth_out;
  harness::SyntheticSpec synth_spec;
  auto* synth = app.add_subcommand("synth", "Write a synthetic oriented-grating corpus");
  synth->add_option("--out", synth_out, "Output corpus root")->required();
  synth->add_option("--classes", synth_spec.classes)->capture_default_str();
  synth->add_option("--per-class", synth_spec.per_class)->capture_default_str();
  synth->add_option("--width", synth_spec.width)->capture_default_str();
  synth->add_option("--height", synth_spec.height)->capture_default_str();
  synth->add_option("--period", synth_spec.period, "Grating wavelength in pixels")->capture_default_str();
  synth->add_option("--seed", synth_spec.seed)->capture_default_str();

  double level = 0.0;
  std::uint64_t seed = 0;
  bool stddev = false;
  bool quantize = false;
  std::string emit;
  auto* noise = app.add_subcommand("noise", "Write a noisy copy of a corpus");
  add_corpus_options(noise, corpus);
  noise->add_option("--level", level, "Noise level (variance on [0,1] unless --stddev)")->required();
  noise->add_option("--seed", seed, "Master seed")->capture_default_str();
  noise->add_option("--emit", emit, "Output corpus root")->required();
  noise->add_flag("--stddev", stddev, "Read --level as a standard deviation");
  noise->add_flag("--quantize", quantize, "Round noisy intensities to 8 bits");

  std::string descriptor;
  std::string out;
  int workers = -1;
  auto* extract = app.add_subcommand("extract", "Extract descriptor histograms into a feature file");
  add_corpus_options(extract, corpus);
  extract->add_option("--descriptor", descriptor, "lbp:R,N or ldp:k")->required();
  extract->add_option("--out", out, "Feature file (labels.map is written beside it)")->required();
  extract->add_option("--level", level, "Noise level applied before extraction")->capture_default_str();
  extract->add_option("--seed", seed, "Master seed")->capture_default_str();
  extract->add_flag("--stddev", stddev, "Read --level as a standard deviation");
  extract->add_flag("--quantize", quantize, "Round noisy intensities to 8 bits");
  extract->add_option("--workers", workers, "Threads (0 = all cores)");

  std::string features_path;
  std::string classifier;
  double ratio = 0.8;
  auto* eval = app.add_subcommand("eval", "Train and score one classifier on a feature file");
  eval->add_option("--features", features_path, "Feature file")->required();
  eval->add_option("--classifier", classifier, "knn, gnb, logreg or mlp, with optional :key=value,...")
      ->required();
  eval->add_option("--split-ratio", ratio, "Training fraction per class")->capture_default_str();
  eval->add_option("--seed", seed, "Master seed")->capture_default_str();

  std::string plan_path;
  bool quiet = false;
  auto* bench = app.add_subcommand("bench", "Run the full experiment matrix of a plan");
  bench->add_option("--plan", plan_path, "Plan JSON")->required();
  bench->add_option("--out", out, "Output directory (overrides the plan)");
  bench->add_option("--workers", workers, "Threads (0 = all cores, overrides the plan)");
  bench->add_flag("--quiet", quiet, "No progress on stderr");

  std::string run_dir;
  auto* report = app.add_subcommand("report", "Rebuild tables.md and figures.csv from a run directory");
  report->add_option("--in", run_dir, "Directory holding results.csv and run.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what(), 2);
  }

  try {
    if (*ingest) return run_ingest(corpus);
    if (*synth) return run_synth(synth_out, synth_spec);
    if (*noise) return run_noise(corpus, level, seed, emit, stddev, quantize);
    if (*extract) return run_extract(corpus, descriptor, out, level, seed, stddev, quantize, workers < 0 ? 0 : workers);
    if (*eval) return run_eval(features_path, classifier, ratio, seed);
    if (*bench) return run_bench(plan_path, out, workers, quiet);
    if (*report) return run_report(run_dir);
  } catch (const Error& e) {
    return fail(to_string(e.code()), e.what());
  } catch (const fs::filesystem_error& e) {
    return fail("io_error", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 1;
}
