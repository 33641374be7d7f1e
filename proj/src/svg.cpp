#include "shapebench/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "shapebench/errors.hpp"

namespace shapebench {
namespace {

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

void line(std::ostringstream& o, double x1, double y1, double x2, double y2,
          const char* stroke = "#222", const char* width = "1") {
    o << "  <line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x2)
      << "\" y2=\"" << px(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << width
      << "\"/>\n";
}

}  // namespace

std::string boxplot_svg(const std::string& title, const std::string& value_label,
                        const std::vector<BoxplotSeries>& series) {
    if (series.empty()) throw ContractViolation("boxplot_svg: at least one series required");

    const double width = 480.0, height = 360.0;
    const double left = 72.0, right = 16.0, top = 44.0, bottom = 48.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double lo = series.front().stats.min, hi = series.front().stats.max;
    for (const BoxplotSeries& s : series) {
        lo = std::min(lo, s.stats.min);
        hi = std::max(hi, s.stats.max);
    }
    double pad = (hi - lo) * 0.08;
    if (pad <= 0.0) pad = std::max(1.0, std::abs(hi) * 0.05);
    lo -= pad;
    hi += pad;
    const auto y = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width) << "\" height=\""
      << px(height) << "\" viewBox=\"0 0 " << px(width) << " " << px(height) << "\">\n";
    o << "  <rect width=\"" << px(width) << "\" height=\"" << px(height)
      << "\" fill=\"white\"/>\n";
    o << "  <text x=\"" << px(width / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";
    o << "  <text x=\"16\" y=\"" << px(top + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 "
      << px(top + plot_h / 2) << ")\">" << xml_escape(value_label) << "</text>\n";

    // Frame and value ticks.
    line(o, left, top, left, top + plot_h);
    line(o, left, top + plot_h, left + plot_w, top + plot_h);
    const int ticks = 5;
    for (int t = 0; t <= ticks; ++t) {
        const double v = lo + (hi - lo) * t / ticks;
        line(o, left - 4, y(v), left, y(v));
        o << "  <text x=\"" << px(left - 8) << "\" y=\"" << px(y(v) + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
          << tick_text(v) << "</text>\n";
    }

    const double slot = plot_w / static_cast<double>(series.size());
    const double half = std::min(28.0, slot / 3.0);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const BoxplotStats& s = series[i].stats;
        const double cx = left + (static_cast<double>(i) + 0.5) * slot;
        line(o, cx, y(s.min), cx, y(s.q1));
        line(o, cx, y(s.q3), cx, y(s.max));
        line(o, cx - half / 2, y(s.min), cx + half / 2, y(s.min));
        line(o, cx - half / 2, y(s.max), cx + half / 2, y(s.max));
        o << "  <rect x=\"" << px(cx - half) << "\" y=\"" << px(y(s.q3)) << "\" width=\""
          << px(2 * half) << "\" height=\"" << px(std::max(0.0, y(s.q1) - y(s.q3)))
          << "\" fill=\"#cfe2f3\" stroke=\"#222\" stroke-width=\"1\"/>\n";
        line(o, cx - half, y(s.median), cx + half, y(s.median), "#222", "2");
        o << "  <text x=\"" << px(cx) << "\" y=\"" << px(top + plot_h + 20)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
          << xml_escape(series[i].label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace shapebench
