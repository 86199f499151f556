#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "texnoise/classifiers.hpp"

namespace texnoise::features {

/// Feature file layout (text, one record per line):
///
///   #texnoise-features v1,<descriptor_id>,<dimension>,<count>
///   <relative_path>,<label>,<v0>,...,<v{dimension-1}>
///
/// Values use the shortest decimal that round-trips. Labels index the sorted
/// subject names listed in the `labels.map` sidecar (`index,name` lines).
inline constexpr std::string_view kMagic = "#texnoise-features";
inline constexpr int kFormatVersion = 1;

struct FeatureHeader {
  int version = kFormatVersion;
  std::string descriptor_id;
  std::size_t dimension = 0;
  std::size_t count = 0;

  friend bool operator==(const FeatureHeader&, const FeatureHeader&) = default;
};

struct FeatureRecord {
  std::string relative_path;
  int label = 0;
  std::vector<double> values;

  friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

struct FeatureFile {
  FeatureHeader header;
  std::vector<FeatureRecord> records;
};

/// Throws on any invariant violation (dimension, finiteness, unique paths,
/// count, and characters the CSV layout cannot carry).
void validate(const FeatureHeader& header, const std::vector<FeatureRecord>& records);

std::string format_features(const FeatureHeader& header, const std::vector<FeatureRecord>& records);
FeatureFile parse_features(std::string_view text);

/// Validates, then writes to a temporary sibling and renames over `path`.
void write_features(const std::filesystem::path& path, const FeatureHeader& header,
                    const std::vector<FeatureRecord>& records);
FeatureFile read_features(const std::filesystem::path& path);

/// Records in file order as a classifier dataset.
classifiers::LabeledFeatures to_labeled(const FeatureFile& file, std::vector<std::string> class_names = {});

std::filesystem::path label_map_path(const std::filesystem::path& features_path);
void write_label_map(const std::filesystem::path& path, const std::vector<std::string>& names);
std::vector<std::string> read_label_map(const std::filesystem::path& path);

/// Relative path without its extension, the key used to join feature records
/// to corpus images (an exporter may re-encode files).
std::string join_key(std::string_view relative_path);

/// Writes `contents` to `path` through a temporary file + rename.
void write_text_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace texnoise::features
