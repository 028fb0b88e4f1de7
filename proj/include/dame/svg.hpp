// Copyright 2026 The DAME Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DAME_SVG_HPP
#define DAME_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dame {

// Self-contained log-log line chart; just enough to eyeball bound and
// benchmark grids without external tooling.
class SvgChart {
 public:
  struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;  // (x, y), both > 0
  };

  SvgChart(std::string title, std::string x_label, std::string y_label)
      : title_(std::move(title)),
        x_label_(std::move(x_label)),
        y_label_(std::move(y_label)) {}

  void add_series(Series s) {
    for (const auto& [x, y] : s.points)
      if (!(x > 0.0) || !(y > 0.0))
        throw std::invalid_argument(
            "SvgChart: log-log chart needs positive coordinates");
    series_.push_back(std::move(s));
  }

  std::string to_string() const {
    double lo_x = std::numeric_limits<double>::infinity(), hi_x = 0.0;
    double lo_y = std::numeric_limits<double>::infinity(), hi_y = 0.0;
    for (const auto& s : series_) {
      for (const auto& [x, y] : s.points) {
        lo_x = std::min(lo_x, x);
        hi_x = std::max(hi_x, x);
        lo_y = std::min(lo_y, y);
        hi_y = std::max(hi_y, y);
      }
    }
    if (!(hi_x > 0.0)) throw std::runtime_error("SvgChart: no data");
    if (lo_x == hi_x) hi_x = lo_x * 10.0;
    if (lo_y == hi_y) hi_y = lo_y * 10.0;

    const double w = 640.0, h = 480.0;
    const double ml = 70.0, mr = 20.0, mt = 40.0, mb = 50.0;
    const auto px = [&](double x) {
      return ml + (std::log(x) - std::log(lo_x)) /
                      (std::log(hi_x) - std::log(lo_x)) * (w - ml - mr);
    };
    const auto py = [&](double y) {
      return h - mb -
             (std::log(y) - std::log(lo_y)) /
                 (std::log(hi_y) - std::log(lo_y)) * (h - mt - mb);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
        << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
        << "\">\n";
    out << "<rect width=\"" << w << "\" height=\"" << h
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title_
        << "</text>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"" << h - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\">" << x_label_ << "</text>\n";
    out << "<text x=\"16\" y=\"" << h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\" transform=\"rotate(-90 16 " << h / 2 << ")\">"
        << y_label_ << "</text>\n";
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\""
        << w - ml - mr << "\" height=\"" << h - mt - mb
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    // Decade grid lines with labels.
    for (int d = int(std::ceil(std::log10(lo_x)));
         d <= int(std::floor(std::log10(hi_x))); ++d) {
      const double x = std::pow(10.0, d);
      out << "<line x1=\"" << px(x) << "\" y1=\"" << mt << "\" x2=\""
          << px(x) << "\" y2=\"" << h - mb
          << "\" stroke=\"#ddd\"/>\n";
      out << "<text x=\"" << px(x) << "\" y=\"" << h - mb + 16
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          << "font-size=\"10\">1e" << d << "</text>\n";
    }
    for (int d = int(std::ceil(std::log10(lo_y)));
         d <= int(std::floor(std::log10(hi_y))); ++d) {
      const double y = std::pow(10.0, d);
      out << "<line x1=\"" << ml << "\" y1=\"" << py(y) << "\" x2=\""
          << w - mr << "\" y2=\"" << py(y) << "\" stroke=\"#ddd\"/>\n";
      out << "<text x=\"" << ml - 6 << "\" y=\"" << py(y) + 3
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          << "font-size=\"10\">1e" << d << "</text>\n";
    }

    double legend_y = mt + 16.0;
    for (const auto& s : series_) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : s.points)
        out << px(x) << ',' << py(y) << ' ';
      out << "\"/>\n";
      out << "<text x=\"" << ml + 10 << "\" y=\"" << legend_y
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
          << s.color << "\">" << s.label << "</text>\n";
      legend_y += 14.0;
    }
    out << "</svg>\n";
    return out.str();
  }

  void write_atomic(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open '" + tmp + "'");
      out << to_string();
      if (!out.flush())
        throw std::runtime_error("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
      std::remove(tmp.c_str());
      throw std::runtime_error("rename to '" + path + "' failed");
    }
  }

 private:
  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
};

}  // namespace dame

#endif  // DAME_SVG_HPP
