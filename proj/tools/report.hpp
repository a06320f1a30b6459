#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rootlab/stress.hpp"

namespace rootlab::cli {

// Markdown tables from train, screen, distill, stress and verify artifacts.
// SVG panel file names are linked when `svg_files` is non-empty.
std::string render_markdown(const std::vector<nlohmann::json>& artifacts, const std::vector<std::string>& svg_files);

// One line chart per (model, protocol) panel, a line per degree with 95% CI
// error bars.  Keys are file names.
std::map<std::string, std::string> render_stress_svgs(const StressReport& report);

// Reads the tidy CSV written by StressReport::to_csv (per-fold scores are not
// part of the CSV and stay empty).
StressReport read_stress_csv(const std::string& path);

}  // namespace rootlab::cli
