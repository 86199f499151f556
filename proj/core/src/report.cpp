#include <algorithm>
#include <map>
#include <tuple>

#include "texnoise/error.hpp"
#include "texnoise/format.hpp"
#include "texnoise/harness.hpp"

namespace texnoise::harness {
namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) return out;
    line.remove_prefix(comma + 1);
  }
}

std::string cell_text(double value, bool bold) {
  const auto text = format_fixed(value, 1);
  return bold ? "**" + text + "**" : text;
}

}  // namespace

std::string results_csv(std::span<const ResultTable> tables) {
  std::string out = "noise,method,classifier,accuracy\n";
  for (const auto& table : tables) {
    const auto noise = format_number(table.noise_level);
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.accuracies.size(); ++c) {
        out += noise + "," + row.method_id + "," + table.classifier_ids[c] + "," +
               format_number(row.accuracies[c]) + "\n";
      }
    }
  }
  return out;
}

std::string tables_markdown(std::span<const ResultTable> tables) {
  std::string out = "# Classification accuracy by noise level\n";
  for (const auto& table : tables) {
    out += "\n## Noise level " + format_number(table.noise_level) + "\n\n";
    out += "| Feature Extraction Method |";
    for (const auto& name : table.classifier_names) out += " " + name + " (%) |";
    out += " Mean Value (%) | Std Dev Value (%) |\n";
    out += "|---|";
    for (std::size_t c = 0; c < table.classifier_names.size(); ++c) out += "---:|";
    out += "---:|---:|\n";
    for (const auto& row : table.rows) {
      const double best = row.accuracies.empty() ? 0.0 : *std::max_element(row.accuracies.begin(), row.accuracies.end());
      out += "| " + row.method_name + " |";
      for (const double v : row.accuracies) out += " " + cell_text(v, v == best) + " |";
      out += " " + format_fixed(row.stats.mean, 1) + " | " + format_fixed(row.stats.stddev, 1) + " |\n";
    }
  }
  return out;
}

std::string figures_csv(const FigureSeries& series) {
  std::string out = "series,noise,value,argmax\n";
  const auto emit = [&](std::string_view name, const std::vector<SeriesPoint>& points) {
    for (const auto& p : points) {
      out += std::string(name) + "," + format_number(p.noise_level) + "," + format_number(p.value) + "," +
             join(p.argmax, ";") + "\n";
    }
  };
  emit("highest_accuracy", series.highest_cell);
  emit("highest_mean", series.highest_mean);
  return out;
}

std::vector<ResultTable> parse_results_csv(std::string_view text, const ExperimentPlan& plan) {
  std::map<std::tuple<std::string, std::string, std::string>, double> cells;
  std::size_t line_no = 0;
  bool header = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != "noise,method,classifier,accuracy") {
        throw Error(Errc::kMalformedHeader, "results.csv must start with noise,method,classifier,accuracy");
      }
      header = false;
      continue;
    }
    const auto f = split_fields(line);
    double noise = 0.0;
    double accuracy = 0.0;
    if (f.size() != 4 || !parse_number(f[0], noise) || !parse_number(f[3], accuracy) || accuracy < 0.0 ||
        accuracy > 100.0) {
      throw Error(Errc::kMalformedRecord, "bad results.csv row (line " + std::to_string(line_no) + ")");
    }
    const auto key = std::make_tuple(format_number(noise), std::string(f[1]), std::string(f[2]));
    if (!cells.emplace(key, accuracy).second) {
      throw Error(Errc::kDuplicatePath, "results.csv repeats a cell (line " + std::to_string(line_no) + ")");
    }
  }
  if (header) throw Error(Errc::kMalformedHeader, "results.csv is empty");

  std::vector<ResultTable> tables;
  const auto extractions = plan.extractions();
  for (const double level : plan.noise_levels) {
    ResultTable table;
    table.noise_level = level;
    for (const auto& c : plan.classifiers) {
      table.classifier_ids.push_back(classifiers::classifier_id(c));
      table.classifier_names.push_back(classifiers::display_name(c));
    }
    for (const auto& e : extractions) {
      ResultRow row;
      row.method_id = method_id(e);
      row.method_name = method_name(e);
      for (const auto& cid : table.classifier_ids) {
        const auto it = cells.find({format_number(level), row.method_id, cid});
        if (it == cells.end()) {
          throw Error(Errc::kMissingFeatures, "results.csv lacks cell " + format_number(level) + "," + row.method_id +
                                                  "," + cid);
        }
        row.accuracies.push_back(it->second);
        cells.erase(it);
      }
      row.stats = row_stats(row.accuracies);
      table.rows.push_back(std::move(row));
    }
    tables.push_back(std::move(table));
  }
  if (!cells.empty()) {
    const auto& [noise, method, cid] = cells.begin()->first;
    throw Error(Errc::kInvalidPlan, "results.csv cell " + noise + "," + method + "," + cid + " is not in the plan");
  }
  return tables;
}

void render_reports(std::span<const ResultTable> tables, const FigureSeries& series, const ExperimentPlan& plan,
                    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::kIo, "cannot create output directory " + out_dir.string());
  features::write_text_atomic(out_dir / "results.csv", results_csv(tables));
  features::write_text_atomic(out_dir / "tables.md", tables_markdown(tables));
  features::write_text_atomic(out_dir / "figures.csv", figures_csv(series));
  features::write_text_atomic(out_dir / "run.json", plan_to_json(plan));
}

}  // namespace texnoise::harness
