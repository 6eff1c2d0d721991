#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace eqlat {

// Shortest round-trip decimal representation; non-finite values spelled out.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// RFC-4180: CRLF line endings, UTF-8, mandatory header row.
inline void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\r\n";
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

struct PlotSeries {
  std::vector<double> x, y;
  std::string id;
  std::string color = "#1f77b4";
  bool step = false;    // right-continuous step curve
  bool points = false;  // draw markers instead of a connected line
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string svg_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace detail

// Minimal static SVG line plot. Deterministic bytes for fixed input.
inline void write_svg_plot(const std::string& path, const std::string& title,
                           const std::string& xlabel, const std::string& ylabel,
                           const std::vector<PlotSeries>& series, bool logy = false) {
  const double width = 640, height = 440;
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!logy || y > 0.0);
  };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      double yy = logy ? std::log10(s.y[i]) : s.y[i];
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, yy);
      ymax = std::max(ymax, yy);
    }
  if (!std::isfinite(xmin)) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
  if (xmax - xmin < 1e-300) { xmax = xmin + 1; }
  if (ymax - ymin < 1e-300) { ymax = ymin + 1; ymin -= 1; }
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto py = [&](double y) {
    double yy = logy ? std::log10(y) : y;
    return height - mb - (yy - ymin) / (ymax - ymin) * (height - mt - mb);
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_svg_plot: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title
      << "</text>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fyv = ymin + (ymax - ymin) * i / 4.0;
    const double fy = logy ? std::pow(10.0, fyv) : fyv;
    out << "<text x=\"" << detail::svg_num(px(fx)) << "\" y=\"" << height - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << detail::svg_label(fx) << "</text>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << detail::svg_num(height - mb - (height - mt - mb) * i / 4.0 + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << detail::svg_label(fy) << "</text>\n";
  }
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << height / 2
      << ")\">" << ylabel << "</text>\n";

  for (const auto& s : series) {
    if (s.points) {
      out << "<g id=\"" << s.id << "\" fill=\"" << s.color << "\">\n";
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!usable(s.x[i], s.y[i])) continue;
        out << "<circle cx=\"" << detail::svg_num(px(s.x[i])) << "\" cy=\"" << detail::svg_num(py(s.y[i]))
            << "\" r=\"3\"/>\n";
      }
      out << "</g>\n";
      continue;
    }
    std::string d;
    bool first = true;
    double prev_y = 0.0;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      const std::string X = detail::svg_num(px(s.x[i])), Y = detail::svg_num(py(s.y[i]));
      if (first) {
        d += "M" + X + " " + Y;
        first = false;
      } else if (s.step) {
        d += " L" + X + " " + detail::svg_num(py(prev_y)) + " L" + X + " " + Y;
      } else {
        d += " L" + X + " " + Y;
      }
      prev_y = s.y[i];
    }
    out << "<path id=\"" << s.id << "\" d=\"" << d << "\" fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\"/>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write_svg_plot: write failed for " + path);
}

}  // namespace eqlat
