// Copyright 2026 the hypersim authors
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

#pragma once

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hypersim/metrics.hpp"

namespace hypersim {

/// 12 significant digits, enough to audit every tolerance in the suite.
inline std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
}

/// Comma-separated sweep table with a header row and LF line endings; output
/// is byte-identical for identical seeds, flags and any worker count.
inline void write_sweep_csv(const SweepTable& table, std::ostream& os) {
    os << "x,r,F_mean,F_se,eta_numeric,eta_numeric_se,eta_closed\n";
    for (const SweepRow& row : table.rows) {
        os << format_number(row.x) << ',' << format_number(row.r) << ','
           << format_number(row.f_mean) << ',' << format_number(row.f_se) << ','
           << format_number(row.eta_numeric) << ',' << format_number(row.eta_numeric_se)
           << ',' << format_number(row.eta_closed) << '\n';
    }
}

struct ReflectionScanRow {
    double detuning = 0.0;
    Complex r;
};

inline void write_reflection_scan_csv(const std::vector<ReflectionScanRow>& rows,
                                      std::ostream& os) {
    os << "detuning,re_r,im_r,abs_r,arg_r\n";
    for (const ReflectionScanRow& row : rows) {
        os << format_number(row.detuning) << ',' << format_number(row.r.real()) << ','
           << format_number(row.r.imag()) << ',' << format_number(std::abs(row.r)) << ','
           << format_number(std::arg(row.r)) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Minimal single-file SVG line chart: two monotone curves with a legend.
// ---------------------------------------------------------------------------

inline std::string sweep_svg(const SweepTable& table) {
    const int width = 640, height = 480;
    const int ml = 70, mr = 20, mt = 30, mb = 55;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;

    double xmin = table.rows.front().x;
    double xmax = table.rows.back().x;
    if (xmax <= xmin) xmax = xmin + 1.0;
    const double ymin = 0.0, ymax = 1.05;

    auto to_x = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * plot_w; };
    auto to_y = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * plot_h; };

    auto polyline = [&](auto value_of) {
        std::ostringstream pts;
        for (size_t i = 0; i < table.rows.size(); ++i) {
            if (i) pts << ' ';
            pts << format_number(to_x(table.rows[i].x)) << ','
                << format_number(to_y(value_of(table.rows[i])));
        }
        return pts.str();
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // Axes and ticks.
    os << "<g stroke=\"black\" fill=\"none\">\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
       << (mt + plot_h) << "\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << (mt + plot_h) << "\" x2=\"" << (ml + plot_w)
       << "\" y2=\"" << (mt + plot_h) << "\"/>\n";
    os << "</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double px = to_x(xv);
        os << "<line x1=\"" << format_number(px) << "\" y1=\"" << (mt + plot_h)
           << "\" x2=\"" << format_number(px) << "\" y2=\"" << (mt + plot_h + 5)
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << format_number(px) << "\" y=\"" << (mt + plot_h + 20)
           << "\" text-anchor=\"middle\">" << format_number(xv) << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double yv = i / 5.0;
        const double py = to_y(yv);
        os << "<line x1=\"" << (ml - 5) << "\" y1=\"" << format_number(py) << "\" x2=\""
           << ml << "\" y2=\"" << format_number(py) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << (ml - 10) << "\" y=\"" << format_number(py + 4)
           << "\" text-anchor=\"end\">" << format_number(yv) << "</text>\n";
    }
    os << "<text x=\"" << (ml + plot_w / 2) << "\" y=\"" << (height - 12)
       << "\" text-anchor=\"middle\">coupling ratio g / sqrt(kappa gamma)</text>\n";
    os << "<text x=\"18\" y=\"" << (mt + plot_h / 2)
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (mt + plot_h / 2)
       << ")\">average value</text>\n";
    os << "</g>\n";

    os << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"2\" points=\""
       << polyline([](const SweepRow& r) { return r.f_mean; }) << "\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"2\" stroke-dasharray=\""
          "8,5\" points=\""
       << polyline([](const SweepRow& r) { return r.eta_numeric; }) << "\"/>\n";

    // Legend.
    os << "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"black\">\n";
    os << "<line x1=\"" << (ml + 20) << "\" y1=\"" << (mt + 16) << "\" x2=\"" << (ml + 55)
       << "\" y2=\"" << (mt + 16) << "\" stroke=\"red\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << (ml + 62) << "\" y=\"" << (mt + 20)
       << "\">average fidelity</text>\n";
    os << "<line x1=\"" << (ml + 20) << "\" y1=\"" << (mt + 36) << "\" x2=\"" << (ml + 55)
       << "\" y2=\"" << (mt + 36)
       << "\" stroke=\"blue\" stroke-width=\"2\" stroke-dasharray=\"8,5\"/>\n";
    os << "<text x=\"" << (ml + 62) << "\" y=\"" << (mt + 40)
       << "\">average efficiency</text>\n";
    os << "</g>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace hypersim
