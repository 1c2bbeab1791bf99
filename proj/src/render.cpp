// Copyright 2026 The Cocite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cocite/render.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace cocite {

namespace {

constexpr int kCell = 22;
constexpr int kLeftMargin = 260;
constexpr int kTopMargin = 70;

std::string escape_xml(std::string_view text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Linear blend from white (0) to #08306b (1).
std::string shade(double value) {
  const double t = std::clamp(value, 0.0, 1.0);
  auto channel = [t](int full) { return static_cast<int>(std::lround(255.0 + (full - 255.0) * t)); };
  return fmt::format("#{:02x}{:02x}{:02x}", channel(0x08), channel(0x30), channel(0x6b));
}

std::string open_svg(int width, int height, const std::string& title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"#ffffff\"/>\n"
      "<text x=\"10\" y=\"20\" font-size=\"14\">{2}</text>\n",
      width, height, escape_xml(title));
}

void column_labels(std::string& out, const std::vector<ClusterId>& columns) {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const int x = kLeftMargin + static_cast<int>(j) * kCell + kCell / 2;
    fmt::format_to(std::back_inserter(out),
                   "<text x=\"{}\" y=\"{}\" text-anchor=\"start\" transform=\"rotate(-60 {} {})\">{}</text>\n", x,
                   kTopMargin - 4, x, kTopMargin - 4, columns[j]);
  }
}

}  // namespace

std::string render_heatmap_svg(const LabelShareMatrix& matrix, const LabelTaxonomy& taxonomy,
                               const std::string& title) {
  const int width = kLeftMargin + static_cast<int>(matrix.columns.size()) * kCell + 20;
  const int height = kTopMargin + static_cast<int>(matrix.rows.size()) * kCell + 20;
  std::string out = open_svg(width, height, title);
  column_labels(out, matrix.columns);
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    const int y = kTopMargin + static_cast<int>(r) * kCell;
    fmt::format_to(std::back_inserter(out), "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                   kLeftMargin - 6, y + kCell * 2 / 3, escape_xml(taxonomy.at(matrix.rows[r]).name));
    for (std::size_t j = 0; j < matrix.columns.size(); ++j) {
      const double v = matrix.cells[r][j];
      // Cells under the inclusion threshold stay blank.
      const std::string fill = v >= matrix.threshold ? shade(v) : std::string("#ffffff");
      fmt::format_to(std::back_inserter(out),
                     "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"#cccccc\">"
                     "<title>{:.4f}</title></rect>\n",
                     kLeftMargin + static_cast<int>(j) * kCell, y, kCell, kCell, fill, v);
    }
  }
  out += "</svg>\n";
  return out;
}

std::string render_dotplot_svg(const CrossMap& map, const std::string& title) {
  const int width = kLeftMargin + static_cast<int>(map.columns.size()) * kCell + 20;
  const int height = kTopMargin + static_cast<int>(map.rows.size()) * kCell + 20;
  std::string out = open_svg(width, height, title);
  column_labels(out, map.columns);
  for (std::size_t r = 0; r < map.rows.size(); ++r) {
    const int y = kTopMargin + static_cast<int>(r) * kCell;
    fmt::format_to(std::back_inserter(out), "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                   kLeftMargin - 6, y + kCell * 2 / 3, map.rows[r]);
    for (std::size_t j = 0; j < map.columns.size(); ++j) {
      if (!map.shown[r][j]) continue;
      // Area proportional to percentage.
      const double radius = (kCell / 2.0 - 1.0) * std::sqrt(map.percent[r][j] / 100.0);
      fmt::format_to(std::back_inserter(out),
                     "<circle cx=\"{}\" cy=\"{}\" r=\"{:.3f}\" fill=\"{}\"><title>{:.2f}%</title></circle>\n",
                     kLeftMargin + static_cast<int>(j) * kCell + kCell / 2, y + kCell / 2, radius,
                     shade(map.percent[r][j] / 100.0), map.percent[r][j]);
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace cocite
