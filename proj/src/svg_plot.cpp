#include "hdsa/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hdsa/errors.hpp"

namespace hdsa {

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 72, kRight = 24, kTop = 34, kBottom = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

struct Series {
  double zeta;
  std::vector<double> eta, line, marker, err;
};

struct Axes {
  double xmin, xmax;  // log10(eta)
  double ymin, ymax;

  double px(double eta) const {
    return kLeft + (std::log10(eta) - xmin) / (xmax - xmin) *
                       (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom -
           (y - ymin) / (ymax - ymin) * (kHeight - kTop - kBottom);
  }
};

std::string num(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

void axis_frame(std::ostringstream& svg, const Axes& ax, const std::string& title,
                const std::string& ylabel) {
  svg << "<rect x='" << kLeft << "' y='" << kTop << "' width='"
      << kWidth - kLeft - kRight << "' height='" << kHeight - kTop - kBottom
      << "' fill='none' stroke='black'/>\n";
  svg << "<text x='" << kWidth / 2 << "' y='" << kTop - 12
      << "' text-anchor='middle' font-size='15'>" << title << "</text>\n";
  svg << "<text x='" << kWidth / 2 << "' y='" << kHeight - 14
      << "' text-anchor='middle' font-size='13'>eta (log scale)</text>\n";
  svg << "<text x='18' y='" << kHeight / 2
      << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 "
      << kHeight / 2 << ")'>" << ylabel << "</text>\n";

  // log-decade x ticks with 2 and 5 subdivisions
  for (int d = -3; d <= 3; ++d) {
    for (double f : {1.0, 2.0, 5.0}) {
      const double eta = f * std::pow(10.0, d);
      const double lx = std::log10(eta);
      if (lx < ax.xmin - 1e-9 || lx > ax.xmax + 1e-9) continue;
      const double x = ax.px(eta);
      svg << "<line x1='" << x << "' y1='" << kHeight - kBottom << "' x2='" << x
          << "' y2='" << kHeight - kBottom + 5 << "' stroke='black'/>\n";
      svg << "<text x='" << x << "' y='" << kHeight - kBottom + 20
          << "' text-anchor='middle' font-size='11'>" << num(eta) << "</text>\n";
    }
  }
  // 6 linear y ticks
  for (int k = 0; k <= 5; ++k) {
    const double y = ax.ymin + (ax.ymax - ax.ymin) * k / 5.0;
    const double py = ax.py(y);
    svg << "<line x1='" << kLeft - 5 << "' y1='" << py << "' x2='" << kLeft
        << "' y2='" << py << "' stroke='black'/>\n";
    std::ostringstream lbl;
    lbl.precision(3);
    lbl << y;
    svg << "<text x='" << kLeft - 8 << "' y='" << py + 4
        << "' text-anchor='end' font-size='11'>" << lbl.str() << "</text>\n";
  }
}

std::string render_figure(const std::vector<Series>& series,
                          const std::string& title, const std::string& ylabel) {
  Axes ax{1e300, -1e300, 1e300, -1e300};
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.eta.size(); ++i) {
      ax.xmin = std::min(ax.xmin, std::log10(s.eta[i]));
      ax.xmax = std::max(ax.xmax, std::log10(s.eta[i]));
      for (double y : {s.line[i], s.marker[i] - s.err[i], s.marker[i] + s.err[i]}) {
        if (std::isfinite(y)) {
          ax.ymin = std::min(ax.ymin, y);
          ax.ymax = std::max(ax.ymax, y);
        }
      }
    }
  }
  if (!(ax.ymin < ax.ymax)) {
    ax.ymin = (std::isfinite(ax.ymin) ? ax.ymin : 0.0) - 0.5;
    ax.ymax = ax.ymin + 1.0;
  }
  const double pad = 0.05 * (ax.ymax - ax.ymin);
  ax.ymin -= pad;
  ax.ymax += pad;
  if (!(ax.xmin < ax.xmax)) {
    ax.xmin -= 0.1;
    ax.xmax += 0.1;
  }

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth
      << "' height='" << kHeight << "' viewBox='0 0 " << kWidth << " "
      << kHeight << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  axis_frame(svg, ax, title, ylabel);

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))];
    // theory line
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.eta.size(); ++i) {
      if (!std::isfinite(s.line[i])) continue;
      pts << ax.px(s.eta[i]) << ',' << ax.py(s.line[i]) << ' ';
    }
    svg << "<polyline fill='none' stroke='" << color
        << "' stroke-width='1.6' points='" << pts.str() << "'/>\n";
    // simulation markers with error bars
    for (std::size_t i = 0; i < s.eta.size(); ++i) {
      if (!std::isfinite(s.marker[i])) continue;
      const double x = ax.px(s.eta[i]);
      const double y = ax.py(s.marker[i]);
      if (std::isfinite(s.err[i]) && s.err[i] > 0.0) {
        const double y0 = ax.py(s.marker[i] - s.err[i]);
        const double y1 = ax.py(s.marker[i] + s.err[i]);
        svg << "<line x1='" << x << "' y1='" << y0 << "' x2='" << x << "' y2='"
            << y1 << "' stroke='" << color << "'/>\n";
      }
      svg << "<circle cx='" << x << "' cy='" << y << "' r='3' fill='" << color
          << "'/>\n";
    }
    // legend entry
    const double ly = kTop + 16 + 16 * static_cast<double>(si);
    svg << "<line x1='" << kWidth - kRight - 130 << "' y1='" << ly << "' x2='"
        << kWidth - kRight - 106 << "' y2='" << ly << "' stroke='" << color
        << "' stroke-width='1.6'/>\n";
    svg << "<text x='" << kWidth - kRight - 100 << "' y='" << ly + 4
        << "' font-size='12'>zeta = " << num(s.zeta) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

struct Field {
  const char* file;
  const char* title;
  const char* ylabel;
  double SweepRow::*line;
  double SweepRow::*marker;
  double SweepRow::*err;
};

}  // namespace

std::vector<std::string> write_sweep_plots(const std::vector<SweepRow>& rows,
                                           const std::string& out_dir) {
  const Field fields[] = {
      {"plot_w.svg", "Alignment overlap", "w",
       &SweepRow::th_w, &SweepRow::sim_w_mean, &SweepRow::sim_w_std},
      {"plot_v.svg", "Orthogonal overlap", "v",
       &SweepRow::th_v, &SweepRow::sim_v_mean, &SweepRow::sim_v_std},
      {"plot_cindex.svg", "Test c-index", "c-index",
       &SweepRow::th_cindex, &SweepRow::sim_cindex_mean, &SweepRow::sim_cindex_std},
      {"plot_ribs.svg", "Relative integrated Brier score", "R_IBS",
       &SweepRow::th_ribs, &SweepRow::sim_ribs_mean, &SweepRow::sim_ribs_std},
  };

  // group rows by zeta, preserving first-seen order
  std::vector<double> zetas;
  for (const auto& r : rows)
    if (std::find(zetas.begin(), zetas.end(), r.zeta) == zetas.end())
      zetas.push_back(r.zeta);

  std::vector<std::string> written;
  for (const auto& f : fields) {
    std::vector<Series> series;
    for (double z : zetas) {
      Series s;
      s.zeta = z;
      for (const auto& r : rows) {
        if (r.zeta != z) continue;
        s.eta.push_back(r.eta);
        s.line.push_back(r.*f.line);
        s.marker.push_back(r.*f.marker);
        s.err.push_back(r.*f.err);
      }
      series.push_back(std::move(s));
    }
    const std::string path = out_dir + "/" + f.file;
    std::ofstream out(path);
    if (!out) throw ConfigError("plot: cannot write '" + path + "'");
    out << render_figure(series, f.title, f.ylabel);
    written.push_back(path);
  }
  return written;
}

}  // namespace hdsa
