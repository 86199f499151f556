#include <unistd.h>

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "texnoise/error.hpp"
#include "texnoise/featurestore.hpp"
#include "texnoise/format.hpp"

namespace texnoise::features {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
bool parse_integer(std::string_view text, T& value) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

std::string at_line(std::size_t line) { return " (line " + std::to_string(line) + ")"; }

bool has_reserved_chars(std::string_view text) {
  return text.find_first_of(",\r\n") != std::string_view::npos;
}

}  // namespace

void validate(const FeatureHeader& header, const std::vector<FeatureRecord>& records) {
  if (header.version != kFormatVersion) {
    throw Error(Errc::kBadVersion, "unsupported feature file version " + std::to_string(header.version));
  }
  if (header.descriptor_id.empty() || has_reserved_chars(header.descriptor_id)) {
    throw Error(Errc::kInvalidArgument, "descriptor id must be nonempty and free of commas/newlines");
  }
  if (header.dimension == 0) throw Error(Errc::kInvalidArgument, "feature dimension must be positive");
  if (header.count != records.size()) {
    throw Error(Errc::kCountMismatch, "header count " + std::to_string(header.count) + " but " +
                                          std::to_string(records.size()) + " records");
  }
  std::unordered_set<std::string_view> paths;
  for (const auto& r : records) {
    if (r.relative_path.empty() || has_reserved_chars(r.relative_path)) {
      throw Error(Errc::kMalformedRecord, "relative path '" + r.relative_path + "' cannot be stored");
    }
    if (r.label < 0) throw Error(Errc::kMalformedRecord, "negative label for " + r.relative_path);
    if (r.values.size() != header.dimension) {
      throw Error(Errc::kDimensionMismatch, r.relative_path + " has " + std::to_string(r.values.size()) +
                                                " values, header says " + std::to_string(header.dimension));
    }
    for (const double v : r.values) {
      if (!std::isfinite(v)) throw Error(Errc::kNonFiniteValue, "non-finite value in " + r.relative_path);
    }
    if (!paths.insert(r.relative_path).second) {
      throw Error(Errc::kDuplicatePath, "duplicate relative path " + r.relative_path);
    }
  }
}

std::string format_features(const FeatureHeader& header, const std::vector<FeatureRecord>& records) {
  validate(header, records);
  std::string out;
  out.reserve(64 + records.size() * (32 + header.dimension * 12));
  out += kMagic;
  out += " v" + std::to_string(header.version) + "," + header.descriptor_id + "," +
         std::to_string(header.dimension) + "," + std::to_string(header.count) + "\n";
  for (const auto& r : records) {
    out += r.relative_path;
    out += ',';
    out += std::to_string(r.label);
    for (const double v : r.values) {
      out += ',';
      out += format_number(v);
    }
    out += '\n';
  }
  return out;
}

FeatureFile parse_features(std::string_view text) {
  if (text.empty()) throw Error(Errc::kBadMagic, "empty feature file");
  // Every line, the last included, is newline-terminated; anything else is a
  // truncated write.
  if (text.back() != '\n') throw Error(Errc::kMalformedRecord, "feature file does not end with a newline");
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  }
  if (lines.empty()) throw Error(Errc::kBadMagic, "empty feature file");

  FeatureFile file;
  const auto head = split(lines[0], ',');
  const std::string magic_prefix = std::string(kMagic) + " ";
  if (!head[0].starts_with(magic_prefix)) {
    throw Error(Errc::kBadMagic, "feature file does not start with '" + std::string(kMagic) + "'");
  }
  const auto version = head[0].substr(magic_prefix.size());
  if (version.size() < 2 || version[0] != 'v' || !parse_integer(version.substr(1), file.header.version)) {
    throw Error(Errc::kBadVersion, "unreadable feature file version '" + std::string(version) + "'");
  }
  if (file.header.version != kFormatVersion) {
    throw Error(Errc::kBadVersion, "unsupported feature file version " + std::to_string(file.header.version));
  }
  if (head.size() != 4) throw Error(Errc::kMalformedHeader, "feature header needs 4 comma-separated fields");
  file.header.descriptor_id = std::string(head[1]);
  if (file.header.descriptor_id.empty()) throw Error(Errc::kMalformedHeader, "empty descriptor id");
  if (!parse_integer(head[2], file.header.dimension) || file.header.dimension == 0) {
    throw Error(Errc::kMalformedHeader, "bad dimension '" + std::string(head[2]) + "'");
  }
  if (!parse_integer(head[3], file.header.count)) {
    throw Error(Errc::kMalformedHeader, "bad record count '" + std::string(head[3]) + "'");
  }

  const std::size_t d = file.header.dimension;
  std::unordered_set<std::string> paths;
  file.records.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const auto fields = split(lines[li], ',');
    if (fields.size() < 2 || fields[0].empty()) {
      throw Error(Errc::kMalformedRecord, "record needs a path and a label" + at_line(line_no));
    }
    if (fields.size() != d + 2) {
      throw Error(Errc::kDimensionMismatch, "expected " + std::to_string(d) + " values, found " +
                                                std::to_string(fields.size() - 2) + at_line(line_no));
    }
    FeatureRecord r;
    r.relative_path = std::string(fields[0]);
    if (!parse_integer(fields[1], r.label) || r.label < 0) {
      throw Error(Errc::kMalformedRecord, "bad label '" + std::string(fields[1]) + "'" + at_line(line_no));
    }
    r.values.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      double v = 0.0;
      if (!parse_number(fields[j + 2], v)) {
        throw Error(Errc::kMalformedRecord, "bad value '" + std::string(fields[j + 2]) + "'" + at_line(line_no));
      }
      if (!std::isfinite(v)) {
        throw Error(Errc::kNonFiniteValue, "non-finite value '" + std::string(fields[j + 2]) + "'" + at_line(line_no));
      }
      r.values[j] = v;
    }
    if (!paths.insert(r.relative_path).second) {
      throw Error(Errc::kDuplicatePath, "duplicate relative path " + r.relative_path + at_line(line_no));
    }
    file.records.push_back(std::move(r));
  }
  if (file.records.size() != file.header.count) {
    throw Error(Errc::kCountMismatch, "header count " + std::to_string(file.header.count) + " but " +
                                          std::to_string(file.records.size()) + " records");
  }
  return file;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view contents) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kIo, "cannot open for writing: " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(Errc::kIo, "write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::kIo, "cannot move temporary file onto " + path.string());
  }
}

void write_features(const std::filesystem::path& path, const FeatureHeader& header,
                    const std::vector<FeatureRecord>& records) {
  write_text_atomic(path, format_features(header, records));
}

FeatureFile read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open feature file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_features(buffer.str());
}

classifiers::LabeledFeatures to_labeled(const FeatureFile& file, std::vector<std::string> class_names) {
  classifiers::LabeledFeatures out;
  const auto n = static_cast<Eigen::Index>(file.records.size());
  const auto d = static_cast<Eigen::Index>(file.header.dimension);
  out.features.resize(n, d);
  out.labels.reserve(file.records.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = file.records[static_cast<std::size_t>(i)];
    out.features.row(i) = Eigen::Map<const Eigen::RowVectorXd>(r.values.data(), d);
    out.labels.push_back(r.label);
  }
  out.class_names = std::move(class_names);
  out.validate();
  return out;
}

std::filesystem::path label_map_path(const std::filesystem::path& features_path) {
  return features_path.parent_path() / "labels.map";
}

void write_label_map(const std::filesystem::path& path, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty() || has_reserved_chars(names[i])) {
      throw Error(Errc::kInvalidArgument, "class name '" + names[i] + "' cannot be stored in labels.map");
    }
    out += std::to_string(i) + "," + names[i] + "\n";
  }
  write_text_atomic(path, out);
}

std::vector<std::string> read_label_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open label map " + path.string());
  std::vector<std::string> names;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    std::size_t index = 0;
    if (comma == std::string::npos || !parse_integer(std::string_view(line).substr(0, comma), index) ||
        index != names.size() || comma + 1 == line.size()) {
      throw Error(Errc::kMalformedRecord, "label map entries must be consecutive 'index,name'" + at_line(line_no));
    }
    names.push_back(line.substr(comma + 1));
  }
  return names;
}

std::string join_key(std::string_view relative_path) {
  const auto slash = relative_path.find_last_of('/');
  const auto dot = relative_path.find_last_of('.');
  if (dot == std::string_view::npos || (slash != std::string_view::npos && dot < slash) ||
      dot == (slash == std::string_view::npos ? 0 : slash + 1)) {
    return std::string(relative_path);
  }
  return std::string(relative_path.substr(0, dot));
}

}  // namespace texnoise::features
