#include <algorithm>
#include <cctype>
#include <cmath>

#include "texnoise/error.hpp"
#include "texnoise/harness.hpp"
#include "texnoise/random.hpp"

namespace texnoise::harness {
namespace fs = std::filesystem;
namespace {

bool is_image_file(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".pgm" || ext == ".pnm" || ext == ".png";
}

void require_resolution(int width, int height) {
  if (width < 3 || height < 3) {
    throw Error(Errc::kInvalidArgument, "working resolution must be at least 3x3");
  }
}

}  // namespace

std::size_t DatasetManifest::image_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : subjects) n += s.relative_paths.size();
  return n;
}

std::vector<std::string> Dataset::class_names() const {
  std::vector<std::string> names;
  names.reserve(manifest.subjects.size());
  for (const auto& s : manifest.subjects) names.push_back(s.name);
  return names;
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.label);
  return out;
}

DatasetManifest scan_dataset(const fs::path& root, int width, int height) {
  require_resolution(width, height);
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(Errc::kEmptyCorpus, "corpus root is not a directory: " + root.string());
  }
  DatasetManifest manifest;
  manifest.root = root;
  manifest.width = width;
  manifest.height = height;

  std::vector<fs::path> subject_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) subject_dirs.push_back(entry.path());
  }
  std::sort(subject_dirs.begin(), subject_dirs.end());
  if (subject_dirs.empty()) throw Error(Errc::kEmptyCorpus, "no subject directories under " + root.string());
  if (subject_dirs.size() < 2) {
    throw Error(Errc::kTooFewSubjects, "need >= 2 subjects, found 1 under " + root.string());
  }

  for (const auto& dir : subject_dirs) {
    Subject subject;
    subject.name = dir.filename().string();
    if (subject.name.find_first_of(",\r\n") != std::string::npos) {
      throw Error(Errc::kInvalidArgument, "subject name '" + subject.name + "' contains a comma or newline");
    }
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path().filename().string());
    }
    std::sort(files.begin(), files.end());
    if (files.size() < 2) {
      throw Error(Errc::kTooFewImages, "subject '" + subject.name + "' has " + std::to_string(files.size()) +
                                           " images, need >= 2");
    }
    for (const auto& f : files) subject.relative_paths.push_back(subject.name + "/" + f);
    manifest.subjects.push_back(std::move(subject));
  }
  return manifest;
}

Dataset ingest_dataset(const fs::path& root, int width, int height) {
  Dataset data;
  data.manifest = scan_dataset(root, width, height);
  data.samples.reserve(data.manifest.image_count());
  for (std::size_t label = 0; label < data.manifest.subjects.size(); ++label) {
    for (const auto& rel : data.manifest.subjects[label].relative_paths) {
      imaging::GrayImage img;
      try {
        img = imaging::load_image(imaging::read_file(root / rel));
      } catch (const Error& e) {
        throw Error(Errc::kDecodeFailure, rel + ": " + e.what());
      }
      if (img.width() != width || img.height() != height) img = imaging::resize_bilinear(img, width, height);
      data.samples.push_back({rel, static_cast<int>(label), std::move(img)});
    }
  }
  return data;
}

void write_dataset(const Dataset& data, const fs::path& out_root) {
  for (const auto& s : data.samples) {
    fs::path target = out_root / s.relative_path;
    target.replace_extension(".pgm");
    fs::create_directories(target.parent_path());
    imaging::write_file(target, imaging::save_pgm(s.image));
  }
}

Split split_stratified(std::span<const int> labels, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(Errc::kInvalidArgument, "split ratio must lie in (0, 1)");
  int classes = 0;
  for (const int l : labels) {
    if (l < 0) throw Error(Errc::kInvalidArgument, "negative label in split");
    classes = std::max(classes, l + 1);
  }
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);

  Split split;
  for (int c = 0; c < classes; ++c) {
    auto& ids = members[static_cast<std::size_t>(c)];
    if (ids.empty()) continue;
    // One stream per class keeps each subject's partition independent of the others.
    std::mt19937_64 engine(mix64(seed ^ mix64(static_cast<std::uint64_t>(c) + 1)));
    shuffle(ids.begin(), ids.end(), engine);
    if (ids.size() < 2) {
      throw Error(Errc::kSubjectTooSmall, "class " + std::to_string(c) + " with " + std::to_string(ids.size()) +
                                              " image cannot appear in both train and test");
    }
    // The epsilon keeps 0.8 * 10 from rounding up to 9 through representation error.
    const auto wanted = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(ids.size()) - 1e-9));
    const auto n_train = std::clamp<std::size_t>(wanted, 1, ids.size() - 1);
    split.train.insert(split.train.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(), ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Split split_stratified(const Dataset& data, double ratio, std::uint64_t seed) {
  const auto labels = data.labels();
  return split_stratified(labels, ratio, seed);
}

}  // namespace texnoise::harness
