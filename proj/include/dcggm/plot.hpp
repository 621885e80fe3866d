#pragma once

#include <string>
#include <string_view>

#include "dcggm/csv.hpp"

namespace dcggm {

enum class PlotKind { f1, edges, cvcurve, time };

PlotKind parse_plot_kind(std::string_view name);

/// Static SVG line chart, one polyline (mean) plus a +-2 sigma band per method.
///   f1     : f1 against n (cv rows) or against edges (fixed rows)
///   edges  : selected edges against n
///   time   : fit_seconds against p
///   cvcurve: holdout_ll_mean against edges_mean (cv_curves.csv input)
/// Throws Schema on missing columns or an empty table.
std::string render_svg(const csv::Table& table, PlotKind kind);

}  // namespace dcggm
