#include "dcggm/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "dcggm/error.hpp"

namespace dcggm {

PlotKind parse_plot_kind(std::string_view name) {
  if (name == "f1") return PlotKind::f1;
  if (name == "edges") return PlotKind::edges;
  if (name == "cvcurve") return PlotKind::cvcurve;
  if (name == "time") return PlotKind::time;
  throw Error(ErrorKind::InvalidArgument, "unknown plot kind '" + std::string(name) + "'");
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 130.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

struct Stat {
  double x = 0.0;
  double mean = 0.0;
  double sd = 0.0;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw Error(ErrorKind::Schema, "plot: bad number '" + s + "'");
  return v;
}

}  // namespace

std::string render_svg(const csv::Table& table, PlotKind kind) {
  if (table.rows.empty()) throw Error(ErrorKind::Schema, "plot: no data rows");
  std::string x_col, y_col, x_name, y_name;
  switch (kind) {
    case PlotKind::f1: {
      const bool fixed = table.rows.front()[table.column("mode")] == "fixed";
      x_col = fixed ? "edges" : "n";
      y_col = "f1";
      x_name = fixed ? "estimated edges" : "sample size n";
      y_name = "F1 score";
      break;
    }
    case PlotKind::edges:
      x_col = "n";
      y_col = "edges";
      x_name = "sample size n";
      y_name = "selected edges";
      break;
    case PlotKind::time:
      x_col = "p";
      y_col = "fit_seconds";
      x_name = "variables p";
      y_name = "seconds";
      break;
    case PlotKind::cvcurve:
      x_col = "edges_mean";
      y_col = "holdout_ll_mean";
      x_name = "mean selected edges";
      y_name = "mean held-out log-likelihood";
      break;
  }
  const auto cm = table.column("method");
  const auto cx = table.column(x_col);
  const auto cy = table.column(y_col);

  // method -> x -> samples; methods keep first-seen order.
  std::vector<std::string> methods;
  std::map<std::string, std::map<double, std::vector<double>>> groups;
  for (const auto& row : table.rows) {
    if (!groups.count(row[cm])) methods.push_back(row[cm]);
    groups[row[cm]][to_double(row[cx])].push_back(to_double(row[cy]));
  }

  std::map<std::string, std::vector<Stat>> series;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& m : methods) {
    for (const auto& [x, ys] : groups[m]) {
      double mean = 0.0;
      for (double y : ys) mean += y;
      mean /= double(ys.size());
      double var = 0.0;
      for (double y : ys) var += (y - mean) * (y - mean);
      const double sd = ys.size() > 1 ? std::sqrt(var / double(ys.size() - 1)) : 0.0;
      series[m].push_back({x, mean, sd});
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, mean - 2 * sd);
      ymax = std::max(ymax, mean + 2 * sd);
    }
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
  // Axes and ticks.
  svg += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" +
         num(kTop + ph) + "\"/>\n";
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(kTop + ph) +
         "\"/>\n";
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    svg += "<text x=\"" + num(sx(xv)) + "\" y=\"" + num(kTop + ph + 16) + "\" text-anchor=\"middle\">" + label(xv) +
           "</text>\n";
    svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(sy(yv) + 4) + "\" text-anchor=\"end\">" + label(yv) +
           "</text>\n";
  }
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">" + x_name +
         "</text>\n";
  svg += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(kTop + ph / 2) + ")\">" + y_name + "</text>\n</g>\n";

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const auto& pts = series[methods[mi]];
    const std::string color = kPalette[mi % std::size(kPalette)];
    std::string band;
    for (const auto& s : pts) band += num(sx(s.x)) + "," + num(sy(s.mean + 2 * s.sd)) + " ";
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) band += num(sx(it->x)) + "," + num(sy(it->mean - 2 * it->sd)) + " ";
    band.pop_back();
    svg += "<polygon class=\"band\" points=\"" + band + "\" fill=\"" + color + "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    std::string line;
    for (const auto& s : pts) line += num(sx(s.x)) + "," + num(sy(s.mean)) + " ";
    line.pop_back();
    svg += "<polyline class=\"mean\" data-method=\"" + methods[mi] + "\" points=\"" + line + "\" fill=\"none\" stroke=\"" +
           color + "\" stroke-width=\"2\"/>\n";
    const double ly = kTop + 16.0 * double(mi);
    svg += "<line x1=\"" + num(kLeft + pw + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(kLeft + pw + 32) + "\" y2=\"" +
           num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(kLeft + pw + 38) + "\" y=\"" + num(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + methods[mi] + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace dcggm
