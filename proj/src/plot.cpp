#include "phaselab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "phaselab/csv.hpp"
#include "phaselab/error.hpp"

namespace phaselab {
namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

// Roughly five round tick values covering [lo, hi].
std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return t;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
    if (spec.series.empty()) throw ValidationError("plot: no series to draw");
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    std::size_t points = 0;
    auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
    for (const auto& s : spec.series) {
        if (s.x.size() != s.y.size()) throw ValidationError("plot: series '" + s.label + "' has ragged x/y");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (spec.log_y && !(s.y[i] > 0.0))) continue;
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, ty(s.y[i]));
            yhi = std::max(yhi, ty(s.y[i]));
            ++points;
        }
    }
    if (points == 0) throw ValidationError("plot: series contain no drawable points");
    if (xhi == xlo) xhi = xlo + 1.0, xlo -= 1.0;
    if (yhi == ylo) yhi = ylo + 1.0, ylo -= 1.0;
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xlo) / (xhi - xlo) * pw; };
    auto sy = [&](double y) { return kTop + (yhi - ty(y)) / (yhi - ylo) * ph; };
    auto sy_raw = [&](double t) { return kTop + (yhi - t) / (yhi - ylo) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks(xlo, xhi)) {
        o << "<line x1=\"" << sx(t) << "\" y1=\"" << kTop + ph << "\" x2=\"" << sx(t) << "\" y2=\"" << kTop + ph + 5
          << "\" stroke=\"black\"/>";
        o << "<text x=\"" << sx(t) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << num(t)
          << "</text>\n";
    }
    for (double t : ticks(ylo, yhi)) {
        o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy_raw(t) << "\" x2=\"" << kLeft << "\" y2=\"" << sy_raw(t)
          << "\" stroke=\"black\"/>";
        o << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy_raw(t) + 4 << "\" text-anchor=\"end\">"
          << (spec.log_y ? "1e" + num(t) : num(t)) << "</text>\n";
    }
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
      << escape(spec.x_label) << "</text>\n";
    o << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(spec.y_label) << "</text>\n";
    if (!spec.title.empty())
        o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
          << escape(spec.title) << "</text>\n";

    for (std::size_t k = 0; k < spec.series.size(); ++k) {
        const auto& s = spec.series[k];
        const char* color = kColors[k % (sizeof kColors / sizeof *kColors)];
        if (s.kind == PlotKind::line) {
            o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i]) || (spec.log_y && !(s.y[i] > 0.0))) continue;
                o << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
            }
            o << "\"/>\n";
        } else {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i]) || (spec.log_y && !(s.y[i] > 0.0))) continue;
                o << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i]) << "\" r=\"3.5\" fill=\"" << color
                  << "\"/>\n";
            }
        }
        const double ly = kTop + 14 + 18 * static_cast<double>(k);
        o << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"10\" fill=\""
          << color << "\"/>";
        o << "<text x=\"" << kWidth - kRight + 30 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void emit_plot(const std::filesystem::path& csv, PlotKind kind, const std::filesystem::path& svg, bool log_y) {
    const auto table = read_csv(csv);
    if (table.header.size() < 2) throw ValidationError("plot: need an x column and at least one series");
    if (table.rows.empty()) throw ValidationError("plot: " + csv.string() + " has no data rows");
    PlotSpec spec;
    spec.x_label = table.header[0];
    spec.y_label = table.header.size() == 2 ? table.header[1] : "value";
    spec.title = csv.stem().string();
    spec.log_y = log_y;
    std::vector<double> x;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        try {
            x.push_back(std::stod(table.rows[r][0]));
        } catch (const std::exception&) {
            throw ValidationError(csv.string() + ":" + std::to_string(table.line_numbers[r]) + ": non-numeric x");
        }
    }
    for (std::size_t c = 1; c < table.header.size(); ++c) {
        PlotSeries s{table.header[c], x, {}, kind};
        bool numeric = true;
        for (const auto& row : table.rows) {
            try {
                s.y.push_back(std::stod(row[c]));
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (numeric) spec.series.push_back(std::move(s));
    }
    if (spec.series.empty()) throw ValidationError("plot: no numeric series in " + csv.string());
    std::ofstream out(svg);
    if (!out) throw ValidationError("plot: cannot write " + svg.string());
    out << render_svg(spec);
}

}  // namespace phaselab
