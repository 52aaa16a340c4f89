#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace phaselab {

enum class PlotKind { line, scatter };

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    PlotKind kind = PlotKind::line;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    bool log_y = false;
};

/// Self-contained SVG document with axes, ticks and a legend.
std::string render_svg(const PlotSpec& spec);

/// First CSV column is x, every other numeric column becomes a series with
/// its header as label. Throws on an empty table or ragged rows.
void emit_plot(const std::filesystem::path& csv, PlotKind kind, const std::filesystem::path& svg, bool log_y = false);

}  // namespace phaselab
