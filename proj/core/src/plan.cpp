#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "texnoise/error.hpp"
#include "texnoise/format.hpp"
#include "texnoise/harness.hpp"
#include "texnoise/random.hpp"

#ifndef TEXNOISE_VERSION
#define TEXNOISE_VERSION "unknown"
#endif

namespace texnoise::harness {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void plan_error(const std::string& what) { throw Error(Errc::kInvalidPlan, what); }

fs::path resolve(const fs::path& base, const std::string& text) {
  fs::path p(text);
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

template <typename T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    plan_error(std::string("plan field '") + key + "': " + e.what());
  }
}

classifiers::ClassifierConfig classifier_from_json(const json& j) {
  if (j.is_string()) return classifiers::parse_classifier(j.get<std::string>());
  if (!j.is_object() || !j.contains("type")) plan_error("classifier entries are strings or objects with a 'type'");
  // {"type": "mlp", "hidden": 50} is sugar for "mlp:hidden=50".
  std::string spec = field<std::string>(j, "type");
  char sep = ':';
  for (const auto& [key, value] : j.items()) {
    if (key == "type") continue;
    std::string text;
    if (value.is_string()) text = value.get<std::string>();
    else if (value.is_number_unsigned()) text = std::to_string(value.get<std::uint64_t>());
    else if (value.is_number_integer()) text = std::to_string(value.get<std::int64_t>());
    else if (value.is_number_float()) text = format_number(value.get<double>());
    else plan_error("classifier option '" + key + "' must be a number or string");
    spec += sep + key + "=" + text;
    sep = ',';
  }
  return classifiers::parse_classifier(spec);
}

ExternalFeatures external_from_json(const json& j, const fs::path& base) {
  if (!j.is_object()) plan_error("external_features entries must be objects");
  ExternalFeatures ext;
  ext.id = field<std::string>(j, "id");
  ext.name = j.contains("name") ? field<std::string>(j, "name") : ext.id;
  if (!j.contains("files") || !j.at("files").is_array()) plan_error("external feature set needs a 'files' array");
  for (const auto& f : j.at("files")) {
    ExternalFeatures::File file;
    file.noise_level = field<double>(f, "noise");
    file.path = resolve(base, field<std::string>(f, "path"));
    ext.files.push_back(std::move(file));
  }
  return ext;
}

bool valid_id(const std::string& id) {
  return !id.empty() && id.find_first_of(",/;\r\n") == std::string::npos;
}

}  // namespace

std::string_view library_version() noexcept { return TEXNOISE_VERSION; }

const fs::path& ExternalFeatures::file_for(double noise_level) const {
  for (const auto& f : files) {
    if (f.noise_level == noise_level) return f.path;
  }
  throw Error(Errc::kMissingFeatures, "feature set '" + id + "' has no file for noise level " +
                                          format_number(noise_level));
}

std::string method_id(const Extraction& extraction) {
  return std::visit(overloaded{
                        [](const descriptors::DescriptorConfig& d) { return descriptors::descriptor_id(d); },
                        [](const ExternalFeatures& e) { return e.id; },
                    },
                    extraction);
}

std::string method_name(const Extraction& extraction) {
  return std::visit(overloaded{
                        [](const descriptors::DescriptorConfig& d) { return descriptors::display_name(d); },
                        [](const ExternalFeatures& e) { return e.name; },
                    },
                    extraction);
}

void ExperimentPlan::validate() const {
  if (width < 3 || height < 3) plan_error("working resolution must be at least 3x3");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) plan_error("split_ratio must lie in (0, 1)");
  if (workers < 0) plan_error("workers must be >= 0");
  if (noise_levels.empty()) plan_error("plan needs at least one noise level");
  std::set<double> seen;
  for (const double level : noise_levels) {
    if (!std::isfinite(level) || level < 0.0) plan_error("noise levels must be finite and >= 0");
    if (!seen.insert(level).second) plan_error("duplicate noise level " + format_number(level));
  }
  if (descriptors.empty() && external_features.empty()) plan_error("plan needs at least one extraction method");
  if (classifiers.empty()) plan_error("plan needs at least one classifier");

  std::set<std::string> methods;
  for (const auto& d : descriptors) {
    std::visit([](const auto& p) { p.validate(); }, d);
    if (!methods.insert(descriptors::descriptor_id(d)).second) {
      plan_error("descriptor " + descriptors::descriptor_id(d) + " listed twice");
    }
  }
  for (const auto& ext : external_features) {
    if (!valid_id(ext.id)) plan_error("external feature id '" + ext.id + "' is empty or has reserved characters");
    if (ext.name.find_first_of("|\r\n") != std::string::npos) plan_error("feature set name has reserved characters");
    if (!methods.insert(ext.id).second) plan_error("method id '" + ext.id + "' listed twice");
    for (const double level : noise_levels) {
      const auto n = std::count_if(ext.files.begin(), ext.files.end(),
                                   [&](const auto& f) { return f.noise_level == level; });
      if (n != 1) {
        plan_error("feature set '" + ext.id + "' needs exactly one file for noise level " + format_number(level));
      }
    }
  }
  std::set<std::string> columns;
  for (const auto& c : classifiers) {
    classifiers::validate(c);
    if (!columns.insert(classifiers::classifier_id(c)).second) {
      plan_error("classifier " + classifiers::classifier_id(c) + " listed twice");
    }
  }
}

std::vector<Extraction> ExperimentPlan::extractions() const {
  std::vector<Extraction> out;
  for (const auto& d : descriptors) out.emplace_back(d);
  for (const auto& e : external_features) out.emplace_back(e);
  return out;
}

std::uint64_t ExperimentPlan::split_seed() const noexcept { return mix64(seed ^ 0x73706c6974ULL); }

ExperimentPlan parse_plan(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    plan_error(std::string("plan is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) plan_error("plan must be a JSON object");

  static const std::set<std::string> known = {
      "dataset", "width", "height", "noise_levels", "noise_scale", "noise_test_only", "quantize_after_noise",
      "descriptors", "external_features", "classifiers", "split_ratio", "seed", "workers", "output_dir",
      "reproducibility"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) plan_error("unknown plan field '" + key + "'");
  }

  ExperimentPlan plan;
  if (j.contains("dataset")) plan.dataset = resolve(base_dir, field<std::string>(j, "dataset"));
  if (j.contains("output_dir")) plan.output_dir = resolve(base_dir, field<std::string>(j, "output_dir"));
  if (j.contains("width")) plan.width = field<int>(j, "width");
  if (j.contains("height")) plan.height = field<int>(j, "height");
  if (j.contains("noise_levels")) plan.noise_levels = field<std::vector<double>>(j, "noise_levels");
  if (j.contains("noise_scale")) {
    const auto scale = field<std::string>(j, "noise_scale");
    if (scale == "variance") plan.noise_scale = imaging::NoiseScale::kVariance;
    else if (scale == "stddev") plan.noise_scale = imaging::NoiseScale::kStdDev;
    else plan_error("noise_scale must be 'variance' or 'stddev'");
  }
  if (j.contains("noise_test_only")) plan.noise_test_only = field<bool>(j, "noise_test_only");
  if (j.contains("quantize_after_noise")) plan.quantize_after_noise = field<bool>(j, "quantize_after_noise");
  if (j.contains("descriptors")) {
    plan.descriptors.clear();
    for (const auto& d : field<std::vector<std::string>>(j, "descriptors")) {
      plan.descriptors.push_back(descriptors::parse_descriptor(d));
    }
  }
  if (j.contains("external_features")) {
    if (!j.at("external_features").is_array()) plan_error("external_features must be an array");
    for (const auto& e : j.at("external_features")) plan.external_features.push_back(external_from_json(e, base_dir));
  }
  if (j.contains("classifiers")) {
    if (!j.at("classifiers").is_array()) plan_error("classifiers must be an array");
    plan.classifiers.clear();
    for (const auto& c : j.at("classifiers")) plan.classifiers.push_back(classifier_from_json(c));
  }
  if (j.contains("split_ratio")) plan.split_ratio = field<double>(j, "split_ratio");
  if (j.contains("seed")) plan.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("workers")) plan.workers = field<int>(j, "workers");
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open plan " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_plan(buffer.str(), fs::absolute(path).parent_path());
}

std::string plan_to_json(const ExperimentPlan& plan) {
  json j = json::object();
  j["dataset"] = plan.dataset.generic_string();
  j["width"] = plan.width;
  j["height"] = plan.height;
  j["noise_levels"] = plan.noise_levels;
  j["noise_scale"] = plan.noise_scale == imaging::NoiseScale::kVariance ? "variance" : "stddev";
  j["noise_test_only"] = plan.noise_test_only;
  j["quantize_after_noise"] = plan.quantize_after_noise;
  json descriptors = json::array();
  for (const auto& d : plan.descriptors) descriptors.push_back(descriptors::to_spec_string(d));
  j["descriptors"] = descriptors;
  json external = json::array();
  for (const auto& e : plan.external_features) {
    json files = json::array();
    for (const auto& f : e.files) files.push_back({{"noise", f.noise_level}, {"path", f.path.generic_string()}});
    external.push_back({{"id", e.id}, {"name", e.name}, {"files", files}});
  }
  j["external_features"] = external;
  json classifiers = json::array();
  for (const auto& c : plan.classifiers) classifiers.push_back(classifiers::to_spec_string(c));
  j["classifiers"] = classifiers;
  j["split_ratio"] = plan.split_ratio;
  j["seed"] = plan.seed;
  j["workers"] = plan.workers;
  j["output_dir"] = plan.output_dir.generic_string();
  j["reproducibility"] = {
      {"texnoise_version", std::string(library_version())},
      {"split_seed", plan.split_seed()},
      {"noise_seed", "mix64 chain over (seed, fnv1a64(relative_path), bits(level))"},
      {"generator", "mt19937_64, Box-Muller normals"},
  };
  return j.dump(2) + "\n";
}

}  // namespace texnoise::harness
